#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "nsc/determinant.hpp"

using namespace nsc;

namespace {

// companion-matrix oracle for the auxiliary cubic
std::array<cplx, 3> companion_roots(cplx mu) {
  Eigen::Matrix3cd C = Eigen::Matrix3cd::Zero();
  C(0, 2) = -mu * mu;
  C(1, 2) = -2.0 * mu;
  C(2, 2) = -mu;
  C(1, 0) = 1.0;
  C(2, 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(C);
  return {es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2)};
}

double match_distance(const std::array<cplx, 3>& a,
                      const std::array<cplx, 3>& b) {
  double best = 1e300;
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (const auto& p : perms) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i)
      d = std::max(d, std::abs(a[i] - b[p[i]]));
    best = std::min(best, d);
  }
  return best;
}

}  // namespace

TEST_CASE("cubic roots: small-mu limit and exclusion of mu = 0") {
  CHECK_THROWS_AS(cubic_roots(cplx(0.0)), CubicError);
  const auto r = cubic_roots(cplx(1e-6, 0.0));
  for (const auto& m : r.as_array()) CHECK(std::abs(m) < 0.01);
}

TEST_CASE("cubic roots against the companion-matrix oracle") {
  const auto r = cubic_roots(cplx(1.0, 0.0));
  CHECK(match_distance(r.as_array(), companion_roots(1.0)) < 1e-12);

  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int rep = 0; rep < 20; ++rep) {
    const cplx mu(u(rng), u(rng));
    if (std::abs(mu) < 0.1) continue;
    const auto rr = cubic_roots(mu);
    CHECK(match_distance(rr.as_array(), companion_roots(mu)) <
          1e-10 * std::max(1.0, std::abs(mu)));
    CHECK(rr.residual_rel < 1e-12);
  }
}

TEST_CASE("root labeling follows the asymptotic branches") {
  const auto r = cubic_roots(cplx(1e4, 0.0));
  CHECK(std::abs(r.m1 - cplx(-9999.0, 0.0)) < 0.01);
  CHECK(std::abs(r.m2 - cplx(-0.5, -100.0)) < 0.1);
  CHECK(std::abs(r.m3 - cplx(-0.5, 100.0)) < 0.1);

  // conjugating mu swaps the oscillatory pair
  const cplx mu(40.0, 13.0);
  const auto a = cubic_roots(mu);
  const auto b = cubic_roots(std::conj(mu));
  CHECK(std::abs(b.m1 - std::conj(a.m1)) < 1e-9);
  CHECK(std::abs(b.m2 - std::conj(a.m3)) < 1e-9);
  CHECK(std::abs(b.m3 - std::conj(a.m2)) < 1e-9);
}

TEST_CASE("degenerate root pair is flagged at the collision points") {
  for (const cplx mu : discriminant_collisions()) {
    const auto r = cubic_roots(mu);
    CHECK(r.near_degenerate);
    const DetValue v = char_det(mu);
    CHECK(v.degenerate_roots);
    // the determinant vanishes there although mu is not an eigenvalue
    CHECK(std::abs(v.normalized) < 1e-5 * v.scale);
  }
}

TEST_CASE("determinant symmetry under conjugation") {
  // purely imaginary on the positive real axis (away from roots)
  for (double mu : {7.0, 15.0, 33.0, 71.0}) {
    const DetValue v = char_det(cplx(mu, 0.0));
    CHECK(std::abs(v.delta.real()) <= 1e-10 * std::abs(v.delta));
  }
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(2.0, 60.0);
  for (int rep = 0; rep < 12; ++rep) {
    const cplx mu(u(rng), u(rng) - 30.0);
    const DetValue a = char_det(mu);
    const DetValue b = char_det(std::conj(mu));
    CHECK(std::abs(b.delta + std::conj(a.delta)) <=
          1e-10 * std::abs(mu * mu) * a.scale);
  }
}

TEST_CASE("sign changes bracket one root per parabolic window") {
  for (int k : {3, 7, 12}) {
    // Im(Delta/mu^2) changes sign across the window along the real mu axis
    const double lo = std::pow(k * M_PI - M_PI / 2, 2.0);
    const double hi = std::pow(k * M_PI + M_PI / 2, 2.0);
    const double va = char_det(cplx(lo, 0.0)).normalized.imag();
    const double vb = char_det(cplx(hi, 0.0)).normalized.imag();
    CHECK(va * vb < 0.0);
    CHECK(count_zeros_sqrt_plane(parabolic_window(k)) == 1);
  }
}

TEST_CASE("newton refinement from branch seeds") {
  const RootResult p = refine_root(cplx(std::pow(10 * M_PI, 2.0), 0.0));
  CHECK(p.residual <= 1e-12);
  CHECK(in_parabolic_window(p.mu, 10));

  const RootResult h = refine_root(cplx(1.0, 2.0 * M_PI * 5.0));
  CHECK(std::abs(h.mu.real() - 1.0) <= 0.5);
  CHECK(h.residual <= 1e-12);

  // seed midway between parabolic windows with a tight guard diverges
  const double mid = std::pow(10.5 * M_PI, 2.0);
  CHECK_THROWS_AS(refine_root(cplx(mid, 0.0), 1e-12, 80, M_PI / 4),
                  RootError);
}

TEST_CASE("determinant evaluation survives huge imaginary mu") {
  const DetValue v = char_det(cplx(1.0, 2.0e6));
  CHECK(std::isfinite(v.normalized.real()));
  CHECK(std::isfinite(v.normalized.imag()));
  CHECK(std::isfinite(v.scale));
}

TEST_CASE("hyperbolic window counts") {
  for (int k : {2, 5, -4}) CHECK(count_zeros(hyperbolic_window(k)) == 1);
}
