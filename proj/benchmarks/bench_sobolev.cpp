#include <benchmark/benchmark.h>

#include <random>

#include <nilergodic/sobolev.hpp>

using namespace nilergodic;

static void BM_SobolevHeisenberg(benchmark::State& state) {
  std::mt19937_64 rng(11);
  auto F = random_heisenberg_function(rng, 2, 2);
  QuadratureOptions q;
  q.grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sobolev_norm(F, 4, 2.0, q).value);
}
BENCHMARK(BM_SobolevHeisenberg)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_BesselCheck(benchmark::State& state) {
  std::mt19937_64 rng(12);
  auto F = random_heisenberg_function(rng, 3, 3);
  for (auto _ : state) benchmark::DoNotOptimize(bessel_check(F, static_cast<double>(state.range(0))).lhs);
}
BENCHMARK(BM_BesselCheck)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);
