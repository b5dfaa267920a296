#include <benchmark/benchmark.h>

#include <random>

#include "mfgc/coupler.hpp"

using namespace mfgc;

namespace {

CouplingSpec linear() { return CouplingSpec::power(1.0, 1.0, 0.0, 1.0, 1.0, 0.0); }

ScalarField noise(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ScalarField f(g);
  for (double& v : f.values()) v = d(rng);
  return f;
}

void BM_HjbStep(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const GridSpec g(dim, static_cast<int>(state.range(1)), 32, 1.0);
  const auto c = linear();
  const auto p = ModelParams::make(0.5, 1.5, 0.6, 0.5, 1.0, c);
  const auto u = noise(g, 1);
  const auto m = cosine_bump(g, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hjb_step(u, m, 0.0, p, c, {}));
  }
}
BENCHMARK(BM_HjbStep)->Args({1, 64})->Args({1, 256})->Args({2, 32});

void BM_FpkStep(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const GridSpec g(dim, static_cast<int>(state.range(1)), 32, 1.0);
  const auto p = ModelParams::make(0.5, 1.5, 0.6, 0.5, 1.0, linear());
  const auto drift = upwind_drift(noise(g, 2), cosine_bump(g, 0.5), p);
  const auto m = cosine_bump(g, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fpk_step(m, drift, p));
  }
}
BENCHMARK(BM_FpkStep)->Args({1, 64})->Args({1, 256})->Args({2, 32});

void BM_SolveReference(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridSpec g(1, n, n, 1.0);
  const auto c = linear();
  const MFGProblem prob{g, ModelParams::make(0.5, 2.0, 1.0, 1.0, 1.0, c), c,
                        cosine_bump(g, 0.5)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_mfg(prob, {}, 0.0));
  }
}
BENCHMARK(BM_SolveReference)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
