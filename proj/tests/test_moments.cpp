#include <cmath>

#include "doctest.h"
#include "nsc/config.hpp"
#include "nsc/moments.hpp"
#include "nsc/spectrum.hpp"

using namespace nsc;

namespace {

std::vector<EigenPair> family(int k_par, int k_hyp) {
  std::vector<EigenPair> out;
  for (int k = 1; k <= k_par; ++k)
    out.push_back(build_eigenfunction(
        refine_root(cplx(std::pow(k * M_PI, 2.0), 0.0)).mu, Branch::parabolic,
        k));
  for (int k = 1; k <= k_hyp; ++k)
    for (int sk : {k, -k})
      out.push_back(build_eigenfunction(
          refine_root(cplx(1.0, 2.0 * sk * M_PI)).mu, Branch::hyperbolic, sk));
  return out;
}

FourierVector sin2pi() {
  FourierVector v;
  v.coeffs[1] = cplx(0.0, 0.5);
  v.coeffs[-1] = cplx(0.0, -0.5);
  v.mean_zero = true;
  v.sobolev_exponent = 1.0;
  return v;
}

ExpSum sinpi() {
  ExpSum f;
  f.add_term(cplx(0.0, -0.5), cplx(0.0, M_PI));
  f.add_term(cplx(0.0, 0.5), cplx(0.0, -M_PI));
  return f;
}

}  // namespace

TEST_CASE("exponential gram closed forms") {
  std::vector<double> norms;
  const auto G0 = exponential_gram({cplx(0.0)}, 2.0, nullptr);
  CHECK(G0(0, 0).real() == doctest::Approx(2.0));

  const auto G = exponential_gram({cplx(-1.0), cplx(-2.0)}, 1.0);
  const double expected = (std::exp(-3.0) - 1.0) / (-3.0);
  CHECK(std::abs(G(0, 1) - expected) < 1e-12);

  // quadrature oracle
  const int M = 100000;
  double acc = 0.0;
  for (int i = 0; i <= M; ++i) {
    const double t = static_cast<double>(i) / M;
    const double w = (i == 0 || i == M) ? 0.5 : 1.0;
    acc += w * std::exp(-1.0 * (1.0 - t)) * std::exp(-2.0 * (1.0 - t));
  }
  acc /= M;
  CHECK(std::abs(G(0, 1).real() - acc) < 1e-9);

  // PSD
  std::vector<cplx> lams;
  for (int k = 1; k <= 6; ++k) {
    lams.push_back(cplx(-1.0, 2.0 * k * M_PI));
    lams.push_back(cplx(-1.0, -2.0 * k * M_PI));
  }
  const auto Gn = exponential_gram(lams, 1.5, &norms);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Gn);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("moment targets: zeros, conjugation, parabolic smallness") {
  const auto pairs = family(8, 8);

  FourierVector zero_rho;
  zero_rho.mean_zero = true;
  const MomentSystem z = moment_targets(zero_rho, ExpSum(), pairs, 1.5);
  for (const auto& r : z.rows) CHECK(std::abs(r.target) == 0.0);

  const MomentSystem ms = moment_targets(sin2pi(), sinpi(), pairs, 1.5);
  ms.validate();
  for (const auto& r : ms.rows) {
    if (r.branch != Branch::parabolic) continue;
    // super-exponentially small: e^{Re lambda T} * moderate pairing bound
    const double bound = std::exp(r.lambda.real() * 1.5) * r.k * M_PI * 2.0 +
                         1e-300;
    CHECK(std::abs(r.target) <= std::max(bound, 1e-250));
  }
}

TEST_CASE("grid-quadrature and closed-form velocity pairings agree") {
  const auto pairs = family(4, 4);
  const MomentSystem a = moment_targets(sin2pi(), sinpi(), pairs, 1.5);
  const GridFunction u0 = GridFunction::sample(sinpi(), 16384);
  const MomentSystem b = moment_targets(sin2pi(), u0, pairs, 1.5);
  for (size_t i = 0; i < a.rows.size(); ++i)
    CHECK(std::abs(a.rows[i].target - b.rows[i].target) < 1e-7);
}

TEST_CASE("all-zero targets give the zero control") {
  const auto pairs = family(4, 4);
  FourierVector zero_rho;
  zero_rho.mean_zero = true;
  const MomentSystem ms = moment_targets(zero_rho, ExpSum(), pairs, 1.5);
  const ControlSignal p = solve_moments(ms);
  CHECK(p.l2_norm <= 1e-10);
  CHECK(p.residual_norm <= 1e-12);
  for (double v : p.samples) CHECK(std::abs(v) <= 1e-10);
}

TEST_CASE("default moment problem solves cleanly") {
  const auto pairs = family(8, 8);
  const MomentSystem ms = moment_targets(sin2pi(), sinpi(), pairs, 1.5);
  SolveOptions opts;
  const ControlSignal p = solve_moments(ms, opts);
  CHECK(p.residual_norm <= 1e-8);
  CHECK(p.imag_defect <= 1e-8);
  CHECK(p.mean_defect <= 1e-8);
  // endpoint rows pin p at both ends
  CHECK(std::abs(p.samples.front()) <= 1e-8);
  CHECK(std::abs(p.samples.back()) <= 1e-8);

  const auto res = moment_residuals(p, ms, 1 << 16);
  double worst = 0.0;
  for (const cplx& r : res) worst = std::max(worst, std::abs(r));
  CHECK(worst <= 1e-6);
}

TEST_CASE("independent quadrature residual converges at second order") {
  const auto pairs = family(6, 6);
  const MomentSystem ms = moment_targets(sin2pi(), sinpi(), pairs, 1.5);
  const ControlSignal p = solve_moments(ms);

  // compare against the closed-form (algebraic) residuals
  std::vector<cplx> alg(ms.rows.size());
  for (size_t i = 0; i < ms.rows.size(); ++i) {
    cplx acc = 0.0;
    for (size_t j = 0; j < p.modal_rates.size(); ++j) {
      const cplx s = std::conj(ms.rows[i].lambda) + p.modal_rates[j];
      acc += p.modal_coeffs[j] *
             (std::abs(s) < 1e-14 ? cplx(ms.T)
                                  : (std::exp(s * ms.T) - 1.0) / s);
    }
    alg[i] = ms.rows[i].target + acc;
  }
  const auto r1 = moment_residuals(p, ms, 1 << 14);
  const auto r2 = moment_residuals(p, ms, 1 << 15);
  double shrink_med = 0.0;
  std::vector<double> ratios;
  for (size_t i = 0; i < alg.size(); ++i) {
    const double e1 = std::abs(r1[i] - alg[i]);
    const double e2 = std::abs(r2[i] - alg[i]);
    if (e2 > 1e-14) ratios.push_back(e1 / e2);
  }
  REQUIRE(!ratios.empty());
  std::sort(ratios.begin(), ratios.end());
  shrink_med = ratios[ratios.size() / 2];
  CHECK(shrink_med >= 3.5);
}

TEST_CASE("zero control leaves the targets as residuals") {
  const auto pairs = family(4, 4);
  const MomentSystem ms = moment_targets(sin2pi(), sinpi(), pairs, 1.5);
  ControlSignal p;
  p.T = ms.T;
  p.times.resize(2049);
  p.samples.assign(2049, 0.0);
  for (int i = 0; i <= 2048; ++i) p.times[i] = ms.T * i / 2048;
  const auto res = moment_residuals(p, ms, 1 << 12);
  for (size_t i = 0; i < res.size(); ++i)
    CHECK(std::abs(res[i] - ms.rows[i].target) == 0.0);
}

TEST_CASE("hyperbolic exponential conditioning across the critical time") {
  // the finite hyperbolic family stays Riesz-conditioned down to T = 1 and
  // degenerates only below it; the explosion marks the sharp control time
  std::vector<cplx> lams;
  for (int k = 1; k <= 12; ++k) {
    const RootResult r = refine_root(cplx(1.0, 2.0 * k * M_PI));
    lams.push_back(-r.mu);
    lams.push_back(std::conj(-r.mu));
  }
  auto cond_at = [&](double T) {
    std::vector<double> norms;
    const auto G = exponential_gram(lams, T, &norms);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    return es.eigenvalues().maxCoeff() /
           std::max(es.eigenvalues().minCoeff(), 1e-300);
  };
  const double c15 = cond_at(1.5);
  const double c101 = cond_at(1.01);
  const double c08 = cond_at(0.8);
  CHECK(c15 < 20.0);
  CHECK(c101 < 20.0);          // no degeneration above the critical time
  CHECK(c08 / c15 >= 1e3);     // collapse below it
}

TEST_CASE("solvability warning below the critical horizon") {
  const auto pairs = family(4, 4);
  const MomentSystem ms = moment_targets(sin2pi(), sinpi(), pairs, 0.9);
  CHECK(ms.time_check_warning);
}

TEST_CASE("ridge regularization path") {
  const auto pairs = family(4, 4);
  const MomentSystem ms = moment_targets(sin2pi(), sinpi(), pairs, 1.5);
  SolveOptions opts;
  opts.ridge = 1e-10;
  opts.residual_tol = 1e-4;  // ridge trades residual for coefficient size
  const ControlSignal p = solve_moments(ms, opts);
  CHECK(p.imag_defect <= 1e-6);
}

TEST_CASE("lift to the Dirichlet control") {
  ControlSignal p;
  p.T = 1.0;
  p.times = {0.0, 0.5, 1.0};
  p.samples = {0.0, 0.25, 0.5};
  const std::vector<double> trace = {1.0, 2.0, 3.0};
  const ControlSignal h = lift_to_dirichlet(p, trace);
  CHECK(h.samples[1] == doctest::Approx(2.25));

  ControlSignal zero;
  zero.T = 1.0;
  zero.times = {0.0, 1.0};
  zero.samples = {0.0, 0.0};
  const ControlSignal hz = lift_to_dirichlet(zero, {0.0, 0.0});
  for (double v : hz.samples) CHECK(v == 0.0);

  CHECK_THROWS_AS(lift_to_dirichlet(p, {1.0, 2.0}), MomentsError);

  // triangle inequality in L2(0,T)
  double hn = 0.0, tn = 0.0, pn = 0.0;
  for (size_t i = 0; i < p.samples.size(); ++i) {
    const double w = (i == 0 || i + 1 == p.samples.size()) ? 0.5 : 1.0;
    hn += w * h.samples[i] * h.samples[i];
    tn += w * trace[i] * trace[i];
    pn += w * p.samples[i] * p.samples[i];
  }
  CHECK(std::sqrt(hn) <= std::sqrt(tn) + std::sqrt(pn) + 1e-12);
}

TEST_CASE("target decay laws across the branches") {
  // parabolic targets vanish faster than any exponential; hyperbolic target
  // energies are square-summable with a negligible tail
  const auto pairs = family(12, 60);
  const MomentSystem ms = moment_targets(sin2pi(), sinpi(), pairs, 1.5);
  for (double r : {1.0, 5.0, 10.0}) {
    double prev = 1e300;
    for (const auto& row : ms.rows) {
      if (row.branch != Branch::parabolic || row.k < 2) continue;
      const double v = std::abs(row.target) * std::exp(r * row.k);
      CHECK(v <= prev);
      prev = v;
    }
    CHECK(prev <= 1e-30);
  }
  double s30 = 0.0, s60 = 0.0;
  for (const auto& row : ms.rows) {
    if (row.branch != Branch::hyperbolic) continue;
    const double e = std::norm(row.target);
    if (std::abs(row.k) <= 30) s30 += e;
    s60 += e;
  }
  CHECK(s60 - s30 <= 0.10 * s30);
}

TEST_CASE("parabolic spectral gap") {
  std::vector<std::pair<int, double>> lams;
  for (int k = 1; k <= 20; ++k)
    lams.push_back(
        {k, refine_root(cplx(std::pow(k * M_PI, 2.0), 0.0)).mu.real()});
  double delta = 1e300;
  for (size_t i = 0; i < lams.size(); ++i)
    for (size_t j = i + 1; j < lams.size(); ++j) {
      const double gap = std::abs(lams[i].second - lams[j].second);
      const double kk = std::abs(static_cast<double>(lams[i].first) *
                                     lams[i].first -
                                 static_cast<double>(lams[j].first) *
                                     lams[j].first);
      delta = std::min(delta, gap / kk);
    }
  CHECK(delta >= 9.0);  // fitted gap constant, close to pi^2
}

TEST_CASE("experiment configuration: validation, round trip, hashing") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());

  ExperimentConfig bad = cfg;
  bad.T = 0.9;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.override_time_check = true;
  CHECK_NOTHROW(bad.validate());

  bad = cfg;
  bad.s = 0.4;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.K_hyp = 2;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  const ExperimentConfig back = ExperimentConfig::from_json(cfg.to_json());
  CHECK(back.T == cfg.T);
  CHECK(back.K_para == cfg.K_para);
  CHECK(back.hash() == cfg.hash());

  // the artifact directory is not part of the experiment identity
  ExperimentConfig moved = cfg;
  moved.out_dir = "elsewhere";
  CHECK(moved.hash() == cfg.hash());

  ExperimentConfig changed = cfg;
  changed.N = 2048;
  CHECK(changed.hash() != cfg.hash());

  // default initial data reconstructs sin(2 pi x)
  const FourierVector rho0 = cfg.rho0();
  CHECK(rho0.mean_zero);
  CHECK(std::abs(rho0.coeffs.at(1) - cplx(0.0, 0.5)) == 0.0);
  const ExpSum u0 = cfg.u0();
  CHECK(u0(0.5).real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("conjugate-inconsistent targets are rejected") {
  const auto pairs = family(4, 4);
  MomentSystem ms = moment_targets(sin2pi(), sinpi(), pairs, 1.5);
  for (auto& r : ms.rows)
    if (r.branch == Branch::hyperbolic && r.k == 2) r.target += cplx(0.0, 0.3);
  CHECK_THROWS_AS(solve_moments(ms), MomentsError);
}
