#include <benchmark/benchmark.h>

#include "dispersive/nonlinear.hpp"
#include "dispersive/propagator.hpp"

using namespace dispersive;

static void BM_Evolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridSpec spec{n, static_cast<std::size_t>(state.range(1)), 64.0};
  const auto rel = builtin("klein_gordon");
  const auto f = gaussian_field(spec, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(rel, f, 3.0));
}
BENCHMARK(BM_Evolve)->Args({1, 1024})->Args({1, 16384})->Args({2, 256});

static void BM_BesovNorm(benchmark::State& state) {
  const GridSpec spec{1, 4096, 64.0};
  const auto f = gaussian_field(spec, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(norm(f, Besov{0.5, 4.0, 2.0}));
}
BENCHMARK(BM_BesovNorm);

static void BM_DuhamelMap(benchmark::State& state) {
  const GridSpec spec{1, 512, 64.0};
  NonlinearProblem p;
  p.u0 = gaussian_field(spec, 1.0);
  p.u1 = gaussian_field(spec, 1.0);
  p.M_t = static_cast<std::size_t>(state.range(0));
  p.data_scale = 1e-2;
  const auto u = linear_solution(p);
  for (auto _ : state) benchmark::DoNotOptimize(duhamel_map(p, u));
}
BENCHMARK(BM_DuhamelMap)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
