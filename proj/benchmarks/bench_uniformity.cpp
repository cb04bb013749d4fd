#include <benchmark/benchmark.h>

#include <random>

#include <nilergodic/systems.hpp>
#include <nilergodic/uniformity.hpp>

using namespace nilergodic;

namespace {

FiniteSequence random_cyclic(std::int64_t N) {
  std::mt19937_64 rng(7);
  FiniteSequence f;
  f.values.resize(N);
  for (auto& v : f.values) v = e(unit_double(rng()));
  return f;
}

FiniteSequence skew_orbit(std::int64_t N) {
  return orbit(DynSystem::anzai(std::sqrt(2.0) - 1.0), {0.0, 0.0}, Observable::character({0, 1}), 0, N);
}

}  // namespace

static void BM_GowersU2Fft(benchmark::State& state) {
  auto f = random_cyclic(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gowers_u2_fft(f).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GowersU2Fft)->RangeMultiplier(4)->Range(256, 1 << 16)->Complexity(benchmark::oNLogN);

static void BM_GowersU3Recursive(benchmark::State& state) {
  auto f = random_cyclic(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gowers_norm_cyclic(f, 3, GowersMethod::Recursive).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GowersU3Recursive)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

// The smoothed level-2 kernel dominates U^3 orbit estimates.
static void BM_FejerP2Kernel(benchmark::State& state) {
  const std::int64_t N = state.range(0), K = static_cast<std::int64_t>(std::sqrt(static_cast<double>(N)));
  auto f = skew_orbit(N + 3 * K);
  for (auto _ : state) benchmark::DoNotOptimize(detail::fejer_p2(f.values.data(), K, N + K, K));
  state.SetComplexityN(N);
}
BENCHMARK(BM_FejerP2Kernel)->RangeMultiplier(4)->Range(1 << 12, 1 << 16)->Unit(benchmark::kMillisecond);

static void BM_OrbitEstimateU2(benchmark::State& state) {
  auto f = skew_orbit(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ghk_orbit_estimate(f, 2).value);
}
BENCHMARK(BM_OrbitEstimateU2)->Arg(1 << 14)->Arg(100000)->Unit(benchmark::kMillisecond);
