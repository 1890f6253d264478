#include <cmath>

#include "doctest.h"
#include "nsc/basis.hpp"

using namespace nsc;

namespace {

std::vector<EigenPair> branch_pairs(int k_lo, int k_hi) {
  std::vector<EigenPair> out;
  for (int k = k_lo; k <= k_hi; ++k) {
    out.push_back(build_eigenfunction(
        refine_root(cplx(std::pow(k * M_PI, 2.0), 0.0)).mu, Branch::parabolic,
        k));
    for (int sk : {k, -k})
      out.push_back(build_eigenfunction(
          refine_root(cplx(1.0, 2.0 * sk * M_PI)).mu, Branch::hyperbolic, sk));
  }
  return out;
}

}  // namespace

TEST_CASE("comparison family closed forms at the endpoints") {
  const State psi3 = comparison_family(3, ComparisonKind::psi, 64);
  CHECK(std::abs(psi3.u.values[64]) < 1e-13);   // sin vanishes at x=1
  CHECK(std::abs(psi3.u.values[0]) < 1e-13);    // sin(3 pi) = 0
  CHECK(std::abs(psi3.rho.values[20]) == 0.0);  // first component is zero

  const State pt = comparison_family(-2, ComparisonKind::psi_tilde, 64);
  CHECK(std::abs(pt.rho.values[0]) ==
        doctest::Approx(2.0 * std::exp(-0.5)).epsilon(1e-12));
  CHECK(std::abs(pt.u.values[10]) == 0.0);

  CHECK_THROWS_AS(comparison_family(0, ComparisonKind::psi, 64), EigenError);
}

TEST_CASE("gram of an orthonormal family is the identity") {
  std::vector<State> fam;
  for (int m = 1; m <= 8; ++m) {
    // sqrt(2) sin(m pi x) as the second component
    ExpSum s;
    s.add_term(cplx(0.0, -std::sqrt(2.0) / 2.0), cplx(0.0, m * M_PI));
    s.add_term(cplx(0.0, std::sqrt(2.0) / 2.0), cplx(0.0, -m * M_PI));
    State st;
    st.rho = GridFunction::zeros(2048);
    st.u = GridFunction::sample(s, 2048);
    fam.push_back(st);
  }
  double defect = 0.0;
  const Eigen::MatrixXcd G = gram_matrix(fam, &defect);
  CHECK(defect < 1e-12);
  CHECK((G - Eigen::MatrixXcd::Identity(8, 8)).norm() < 1e-8);

  const GramReport rep = riesz_bounds(G);
  CHECK(rep.min_eig == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(rep.max_eig == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("gram properties: PSD, duplicates, conditioning") {
  std::vector<State> fam;
  for (int m = 1; m <= 4; ++m) {
    ExpSum s;
    s.add_term(cplx(0.4 * m, 0.1), cplx(0.0, 2.0 * M_PI * m));
    s.add_term(cplx(0.2, -0.3 * m), cplx(-0.5 * m, 0.0));
    State st;
    st.rho = GridFunction::sample(s, 1024);
    st.u = GridFunction::sample(s.derivative().scaled(0.05), 1024);
    fam.push_back(st);
  }
  Eigen::MatrixXcd G = gram_matrix(fam);
  GramReport rep = riesz_bounds(G);
  CHECK(rep.min_eig >= -1e-10);

  fam.push_back(fam.front());  // duplicate element
  G = gram_matrix(fam);
  rep = riesz_bounds(G);
  CHECK(rep.min_eig <= 1e-10);
  CHECK(rep.condition >= 1e8);

  CHECK_THROWS_AS(gram_matrix({}), SpacesError);
}

TEST_CASE("identity gram report") {
  const GramReport rep = riesz_bounds(Eigen::MatrixXcd::Identity(16, 16));
  CHECK(rep.min_eig == doctest::Approx(1.0));
  CHECK(rep.max_eig == doctest::Approx(1.0));
  CHECK(rep.size == 16);
}

TEST_CASE("quadratic closeness decays quadratically on both branches") {
  const auto pairs = branch_pairs(5, 40);
  const ClosenessReport rep = quadratic_closeness(pairs, 4096);
  CHECK(rep.slope_parabolic < -1.4);
  CHECK(rep.slope_parabolic > -2.6);
  CHECK(rep.slope_hyperbolic < -1.4);
  CHECK(rep.slope_hyperbolic > -2.6);

  for (const auto& row : rep.rows) CHECK(row.diff_sq >= 0.0);

  // per-k terms eventually decrease within a 2x slack
  double prev = 0.0;
  bool first = true;
  for (const auto& row : rep.rows) {
    if (row.branch != Branch::parabolic || row.k < 20) continue;
    if (!first) CHECK(row.diff_sq <= 2.0 * prev);
    prev = row.diff_sq;
    first = false;
  }
  CHECK(rep.to_csv().rfind("branch,k,diff_sq,cumsum\n", 0) == 0);
}

TEST_CASE("closeness tail increments shrink") {
  const auto pairs = branch_pairs(5, 64);
  const ClosenessReport rep = quadratic_closeness(pairs, 2048);
  auto partial = [&](int K) {
    double s = 0.0;
    for (const auto& row : rep.rows)
      if (row.branch == Branch::parabolic && row.k <= K) s = row.cumsum;
    return s;
  };
  const double s16 = partial(16), s32 = partial(32), s64 = partial(64);
  CHECK(s64 - s32 <= s32 - s16);
}

TEST_CASE("missing partner is reported") {
  auto pairs = branch_pairs(5, 8);
  // drop the k = -6 entry
  pairs.erase(std::remove_if(pairs.begin(), pairs.end(),
                             [](const EigenPair& p) {
                               return p.branch == Branch::hyperbolic &&
                                      p.k == -6;
                             }),
              pairs.end());
  CHECK_THROWS_AS(quadratic_closeness(pairs, 2048), EigenError);
}

TEST_CASE("unit-normalized eigenfamily gram is stable under truncation") {
  const auto pairs = branch_pairs(1, 16);
  std::vector<EigenPair> fam8, fam16;
  for (const auto& p : pairs) {
    if (std::abs(p.k) <= 8) fam8.push_back(p);
    fam16.push_back(p);
  }
  const GramReport r8 = riesz_bounds(gram_matrix_exact(fam8));
  const GramReport r16 = riesz_bounds(gram_matrix_exact(fam16));
  CHECK(r8.min_eig >= 0.01);
  CHECK(r16.min_eig >= 0.01);
  CHECK(std::abs(r16.min_eig - r8.min_eig) <= 0.2 * r8.min_eig);
}
