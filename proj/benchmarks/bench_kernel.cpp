#include <benchmark/benchmark.h>

#include "dispersive/dispersion.hpp"
#include "dispersive/kernel.hpp"

using namespace dispersive;

static void BM_Kernel1d(benchmark::State& state) {
  const auto rel = power_relation(2.0);
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eval_kernel_1d(rel, 0, t, 0.5 * t));
}
BENCHMARK(BM_Kernel1d)->Arg(10)->Arg(100)->Arg(1000);

static void BM_KernelRadial(benchmark::State& state) {
  const auto rel = builtin("klein_gordon");
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eval_kernel_radial(rel, n, 0, 100.0, 50.0));
}
BENCHMARK(BM_KernelRadial)->Arg(2)->Arg(3);

static void BM_SupNorm(benchmark::State& state) {
  const auto rel = power_relation(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(sup_norm(rel, 1, 0, 100.0));
}
BENCHMARK(BM_SupNorm)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
