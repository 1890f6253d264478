#include <benchmark/benchmark.h>

#include <cmath>

#include "nsc/basis.hpp"
#include "nsc/moments.hpp"
#include "nsc/pde.hpp"

using namespace nsc;

namespace {

std::vector<EigenPair> small_family(int K) {
  std::vector<EigenPair> fam;
  for (int k = 1; k <= K; ++k) {
    fam.push_back(build_eigenfunction(
        refine_root(cplx(std::pow(k * M_PI, 2.0), 0.0)).mu, Branch::parabolic,
        k));
    for (int sk : {k, -k})
      fam.push_back(build_eigenfunction(
          refine_root(cplx(1.0, 2.0 * sk * M_PI)).mu, Branch::hyperbolic, sk));
  }
  return fam;
}

}  // namespace

static void BM_CubicRoots(benchmark::State& state) {
  const cplx mu(1.0, 2.0 * M_PI * 17.0);
  for (auto _ : state) benchmark::DoNotOptimize(cubic_roots(mu));
}
BENCHMARK(BM_CubicRoots);

static void BM_CharDet(benchmark::State& state) {
  const cplx mu(std::pow(20.0 * M_PI, 2.0) * 1.0001, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(char_det(mu));
}
BENCHMARK(BM_CharDet);

static void BM_RefineRoot(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const cplx seed(std::pow(k * M_PI, 2.0), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(refine_root(seed));
}
BENCHMARK(BM_RefineRoot)->Arg(5)->Arg(20)->Arg(60);

static void BM_WindowCount(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(count_zeros(hyperbolic_window(12)));
}
BENCHMARK(BM_WindowCount);

static void BM_BuildEigenfunction(benchmark::State& state) {
  const RootResult r = refine_root(cplx(1.0, 2.0 * M_PI * 12.0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        build_eigenfunction(r.mu, Branch::hyperbolic, 12));
}
BENCHMARK(BM_BuildEigenfunction);

static void BM_PairGram(benchmark::State& state) {
  const auto fam = small_family(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix_exact(fam));
}
BENCHMARK(BM_PairGram)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_MomentSolve(benchmark::State& state) {
  const auto fam = small_family(8);
  FourierVector rho0;
  rho0.coeffs[1] = cplx(0.0, 0.5);
  rho0.coeffs[-1] = cplx(0.0, -0.5);
  rho0.mean_zero = true;
  ExpSum u0;
  u0.add_term(cplx(0.0, -0.5), cplx(0.0, M_PI));
  u0.add_term(cplx(0.0, 0.5), cplx(0.0, -M_PI));
  const MomentSystem ms = moment_targets(rho0, u0, fam, 1.5);
  SolveOptions opts;
  opts.sample_count = 512;
  for (auto _ : state) benchmark::DoNotOptimize(solve_moments(ms, opts));
}
BENCHMARK(BM_MomentSolve)->Unit(benchmark::kMillisecond);

static void BM_ForwardSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  State u0;
  u0.rho = GridFunction::zeros(n);
  u0.u = GridFunction::zeros(n);
  for (int i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / n;
    u0.rho.values[i] = std::sin(2.0 * M_PI * x);
    u0.u.values[i] = std::sin(M_PI * x);
  }
  const TimeSignal p = [](double t) { return 0.1 * std::sin(t); };
  const int m = 4 * n;  // CFL-safe for T = 1
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_forward(u0, p, n, m, 1.0, {}));
}
BENCHMARK(BM_ForwardSolve)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
