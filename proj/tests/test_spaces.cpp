#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "nsc/scaling.hpp"
#include "nsc/spaces.hpp"

using namespace nsc;

namespace {

GridFunction sample_fn(int n, const std::function<cplx(double)>& f) {
  GridFunction g = GridFunction::zeros(n);
  for (int i = 0; i <= n; ++i) g.values[i] = f(g.node(i));
  return g;
}

// reconstruction under the coefficient convention: f = sum_m c_m e^{-2pi i m x}
GridFunction reconstruct(const FourierVector& v, int n) {
  return sample_fn(n, [&](double x) {
    cplx s = 0.0;
    for (const auto& [m, c] : v.coeffs)
      s += c * std::exp(cplx(0.0, -2.0 * M_PI * m * x));
    return s;
  });
}

FourierVector random_mean_zero(std::mt19937& rng, int modes, double s = 0.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FourierVector v;
  v.sobolev_exponent = s;
  for (int m = 1; m <= modes; ++m) {
    v.coeffs[m] = cplx(u(rng), u(rng));
    v.coeffs[-m] = cplx(u(rng), u(rng));
  }
  v.mean_zero = true;
  return v;
}

}  // namespace

TEST_CASE("fourier_coeffs picks out single modes") {
  const int n = 256;
  auto ones = sample_fn(n, [](double) { return cplx(1.0); });
  auto c = fourier_coeffs(ones, 4);
  CHECK(std::abs(c.coeffs[0] - 1.0) < 1e-12);
  for (int m = 1; m <= 4; ++m) {
    CHECK(std::abs(c.coeffs[m]) < 1e-12);
    CHECK(std::abs(c.coeffs[-m]) < 1e-12);
  }

  auto mode = sample_fn(
      n, [](double x) { return std::exp(cplx(0.0, -2.0 * M_PI * x)); });
  c = fourier_coeffs(mode, 4);
  CHECK(std::abs(c.coeffs[1] - 1.0) < 1e-12);
  CHECK(std::abs(c.coeffs[-1]) < 1e-12);
  CHECK(std::abs(c.coeffs[2]) < 1e-12);

  auto sine = sample_fn(n, [](double x) { return std::sin(2 * M_PI * x); });
  c = fourier_coeffs(sine, 4);
  CHECK(std::abs(c.coeffs[-1] - cplx(0.0, -0.5)) < 1e-10);
  CHECK(std::abs(c.coeffs[1] - cplx(0.0, 0.5)) < 1e-10);
  CHECK(std::abs(c.coeffs[2]) < 1e-10);
}

TEST_CASE("fourier_coeffs refuses an underresolved grid") {
  auto f = sample_fn(32, [](double) { return cplx(1.0); });
  CHECK_THROWS_AS(fourier_coeffs(f, 16), SpacesError);
  CHECK_THROWS_AS(fourier_coeffs(f, 0), SpacesError);
}

TEST_CASE("sobolev norms on single modes") {
  FourierVector v;
  v.coeffs[1] = 1.0;
  v.mean_zero = true;
  CHECK(sobolev_norm(v, 1.0, true) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
  CHECK(sobolev_norm(v, -1.0, false) ==
        doctest::Approx(1.0 / std::sqrt(1.0 + 4.0 * M_PI * M_PI)).epsilon(1e-14));

  FourierVector w;
  w.coeffs[1] = 3.0;
  w.coeffs[-2] = 4.0;
  CHECK(sobolev_norm(w, 0.0, false) == doctest::Approx(5.0).epsilon(1e-14));

  FourierVector bad;
  bad.coeffs[0] = 1.0;
  CHECK_THROWS_AS(sobolev_norm(bad, 1.0, true), SpacesError);
}

TEST_CASE("norm monotonicity in the exponent") {
  std::mt19937 rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    auto v = random_mean_zero(rng, 6);
    CHECK(sobolev_norm(v, 0.5, false) <= sobolev_norm(v, 1.5, false) + 1e-14);
    CHECK(sobolev_norm(v, -2.0, false) <= sobolev_norm(v, 0.0, false) + 1e-14);
  }
}

TEST_CASE("dual pairing extends the L2 inner product") {
  FourierVector a, b;
  a.coeffs[1] = 1.0;
  b.coeffs[1] = 1.0;
  CHECK(std::abs(dual_pairing(a, a) - 1.0) < 1e-15);
  b.coeffs.clear();
  b.coeffs[2] = 1.0;
  CHECK(std::abs(dual_pairing(a, b)) < 1e-15);

  // grid-quadrature oracle on random 8-mode vectors
  std::mt19937 rng(21);
  for (int rep = 0; rep < 5; ++rep) {
    auto psi = random_mean_zero(rng, 8);
    auto phi = random_mean_zero(rng, 8);
    const int n = 4096;
    const cplx grid = l2_inner(reconstruct(psi, n), reconstruct(phi, n));
    CHECK(std::abs(dual_pairing(psi, phi) - grid) < 1e-9);
  }
}

TEST_CASE("dual pairing sesquilinearity and Cauchy-Schwarz") {
  std::mt19937 rng(3);
  for (int rep = 0; rep < 8; ++rep) {
    auto a = random_mean_zero(rng, 5);
    auto b = random_mean_zero(rng, 5);
    auto c = random_mean_zero(rng, 5);
    const cplx z(0.7, -0.3);
    FourierVector azb = a;
    for (auto& [m, v] : azb.coeffs)
      v = v * z + (b.coeffs.count(m) ? b.coeffs[m] : cplx(0.0));
    const cplx lhs = dual_pairing(azb, c);
    const cplx rhs = z * dual_pairing(a, c) + dual_pairing(b, c);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));

    // conjugate-linear in the second slot
    FourierVector cz = c;
    for (auto& [m, v] : cz.coeffs) v *= z;
    CHECK(std::abs(dual_pairing(a, cz) - std::conj(z) * dual_pairing(a, c)) <
          1e-12);

    const double s = 1.0;
    CHECK(std::abs(dual_pairing(a, b)) <=
          sobolev_norm(a, -s, true) * sobolev_norm(b, s, true) + 1e-12);
  }
}

TEST_CASE("l2_inner closed forms") {
  auto one = sample_fn(128, [](double) { return cplx(1.0); });
  CHECK(std::abs(l2_inner(one, one) - 1.0) < 1e-14);

  auto f = sample_fn(512, [](double x) { return std::sin(M_PI * x); });
  auto g = sample_fn(512, [](double) { return cplx(1.0); });
  CHECK(std::abs(l2_inner(f, g) - 2.0 / M_PI) < 1e-5);

  auto h = sample_fn(512, [](double x) { return std::sin(2 * M_PI * x); });
  CHECK(std::abs(l2_inner(h, h) - 0.5) < 1e-6);

  auto other = sample_fn(256, [](double) { return cplx(1.0); });
  CHECK_THROWS_AS(l2_inner(one, other), SpacesError);
}

TEST_CASE("Parseval consistency for band-limited functions") {
  std::mt19937 rng(11);
  auto v = random_mean_zero(rng, 12);
  const int n = 512;
  auto f = reconstruct(v, n);
  double sum_sq = 0.0;
  for (const auto& [m, c] : v.coeffs) sum_sq += std::norm(c);
  CHECK(std::abs(std::real(l2_inner(f, f)) - sum_sq) < 1e-9);
}

TEST_CASE("FourierVector JSON round trip") {
  FourierVector v;
  v.sobolev_exponent = 1.5;
  v.coeffs[3] = cplx(0.25, -0.125);
  v.coeffs[-3] = cplx(0.25, 0.125);
  auto w = FourierVector::from_json(v.to_json());
  CHECK(w.sobolev_exponent == 1.5);
  CHECK(std::abs(w.coeffs[3] - v.coeffs[3]) == 0.0);
}

TEST_CASE("nondimensionalization of the physical constants") {
  ScalingParams p;  // all ones
  auto n = nondimensionalize(p);
  CHECK(n.b == doctest::Approx(1.0));
  CHECK(n.delta == doctest::Approx(1.0));
  CHECK(n.beta == doctest::Approx(1.0));
  CHECK(n.alpha == doctest::Approx(1.0));

  ScalingParams q{2.0, 1.0, 1.0, 1.0 / 3.0, 3.0, 1.0};
  auto m = nondimensionalize(q);
  CHECK(m.b == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(m.delta == doctest::Approx(2.0).epsilon(1e-14));

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.2, 4.0);
  for (int rep = 0; rep < 10; ++rep) {
    ScalingParams r{u(rng), u(rng), u(rng), u(rng), 1.0 + u(rng), u(rng)};
    auto nd = nondimensionalize(r);
    const double lhs = std::pow(nd.b * r.V0 / r.Q0, 2.0);
    const double rhs = r.a * r.gamma * std::pow(r.Q0, r.gamma - 3.0);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }

  ScalingParams bad;
  bad.gamma = 0.5;
  CHECK_THROWS(nondimensionalize(bad));
}
