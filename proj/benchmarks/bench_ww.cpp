#include <benchmark/benchmark.h>

#include <nilergodic/counterexample.hpp>
#include <nilergodic/ww.hpp>

using namespace nilergodic;

static void BM_UniformSupLinear(benchmark::State& state) {
  const std::int64_t N = state.range(0);
  auto f = orbit(DynSystem::anzai(std::sqrt(2.0) - 1.0), {0.0, 0.0}, Observable::character({0, 1}), 0, N);
  auto phi = FolnerSeq::intervals({N});
  for (auto _ : state) benchmark::DoNotOptimize(uniform_sup_linear(f, 0, phi).values[0]);
  state.SetComplexityN(N);
}
BENCHMARK(BM_UniformSupLinear)->RangeMultiplier(4)->Range(1 << 11, 1 << 17)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_CounterexampleNorms(benchmark::State& state) {
  auto P = build(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(norms(P).sup_upper);
}
BENCHMARK(BM_CounterexampleNorms)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMillisecond);

static void BM_VanDerCorput(benchmark::State& state) {
  std::mt19937_64 rng(3);
  auto u = random_bounded_sequence(rng, 10000 + state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(van_der_corput_check(u, 0, 10000, state.range(0), 1.0).slack);
}
BENCHMARK(BM_VanDerCorput)->Arg(50)->Arg(316);
