#include <benchmark/benchmark.h>

#include "dispersive/special.hpp"

using namespace dispersive;

static void BM_BesselJ(benchmark::State& state) {
  const BesselOrder nu = BesselOrder::from_twice(static_cast<int>(state.range(0)));
  const double r = static_cast<double>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(bessel_j(nu, r));
}
BENCHMARK(BM_BesselJ)->ArgsProduct({{0, 1, 2}, {1, 20, 1000}});

static void BM_Psi(benchmark::State& state) {
  double r = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(BumpPair::psi(r));
    r = r < 2.0 ? r + 1e-3 : 0.5;
  }
}
BENCHMARK(BM_Psi);

BENCHMARK_MAIN();
