// Microbenchmarks for the hot paths: root finding, closed-form operator
// application, backward-series iteration, and the Monte-Carlo L1 norm.

#include <benchmark/benchmark.h>

#include "ruelle/kernels.hpp"
#include "ruelle/polynomial.hpp"
#include "ruelle/ruelle_operator.hpp"
#include "ruelle/series.hpp"
#include "ruelle/suites.hpp"

using namespace ruelle;

static void BM_PolyRoots(benchmark::State& state) {
  const int deg = static_cast<int>(state.range(0));
  std::vector<cplx> coeffs(static_cast<std::size_t>(deg) + 1);
  for (int k = 0; k <= deg; ++k) {
    coeffs[static_cast<std::size_t>(k)] =
        cplx(sample_u01(7, 1, static_cast<std::uint64_t>(k), 0) - 0.5,
             sample_u01(7, 1, static_cast<std::uint64_t>(k), 1) - 0.5);
  }
  coeffs.back() += 1.0;  // keep the degree honest
  Polynomial p(coeffs);
  for (auto _ : state) {
    auto roots = poly_roots(p);
    benchmark::DoNotOptimize(roots);
  }
}
BENCHMARK(BM_PolyRoots)->Arg(4)->Arg(8)->Arg(16);

static void BM_ApplyToKernel(benchmark::State& state) {
  RationalMap map = random_standard_map(11, 0, 3, 3);
  CriticalData cd = critical_data(map);
  Kernel k = Kernel::gamma(cplx(2.0, 0.5));
  for (auto _ : state) {
    auto out = apply_to_kernel(map, cd, k);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_ApplyToKernel);

static void BM_BackwardSeries(benchmark::State& state) {
  RationalMap map = fixture_g();
  CriticalData cd = critical_data(map);
  const std::size_t order = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto b = backward_series_eval(map, cd, cd.values[0], cplx(0.9, 0.0), order,
                                  cplx(2.0, 1.0), KernelKind::gamma);
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(BM_BackwardSeries)->Arg(10)->Arg(40);

static void BM_ForwardSeries(benchmark::State& state) {
  RationalMap map = fixture_g();
  for (auto _ : state) {
    auto r = forward_series(map, cplx(1.0 / 3.0, 0.0), 200);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_ForwardSeries);

static void BM_L1Norm(benchmark::State& state) {
  KernelCombination f = KernelCombination::single(1.0, Kernel::gamma(cplx(3.0, 0.0)));
  const std::size_t samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    NormEstimate n = l1_norm_estimate(f, samples, 5);
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_L1Norm)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
