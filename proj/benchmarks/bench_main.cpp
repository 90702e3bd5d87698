#include <benchmark/benchmark.h>

#include "entcum/convert.hpp"
#include "entcum/engine.hpp"
#include "entcum/numverify.hpp"

using namespace entcum;

// cold engine, no cache: full pipeline up to kappa_l(S)
static void BM_CumulantS(benchmark::State& state) {
  const auto l = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    Engine engine;
    benchmark::DoNotOptimize(cumulant_S(engine, l));
  }
}
BENCHMARK(BM_CumulantS)->DenseRange(2, 6)->Unit(benchmark::kMillisecond);

static void BM_CumulantT(benchmark::State& state) {
  const auto l = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    Engine engine;
    benchmark::DoNotOptimize(engine.cumulant_T(l));
  }
}
BENCHMARK(BM_CumulantT)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_Polygamma(benchmark::State& state) {
  const auto k = static_cast<unsigned>(state.range(0));
  const auto digits = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(polygamma_num(k, Rational(37, 3), digits));
}
BENCHMARK(BM_Polygamma)->ArgsProduct({{0, 3}, {50, 100, 200}})->Unit(benchmark::kMicrosecond);

static void BM_EvalKappa6(benchmark::State& state) {
  Engine engine;
  const SymExpr k6 = cumulant_S(engine, 6);
  for (auto _ : state) benchmark::DoNotOptimize(eval_expr(k6, 5, 9, 100));
}
BENCHMARK(BM_EvalKappa6)->Unit(benchmark::kMillisecond);

static void BM_SampleSpectrum(benchmark::State& state) {
  const auto m = static_cast<unsigned>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    CounterRng rng(1, i++);
    benchmark::DoNotOptimize(sample_spectrum(m, 2 * m, rng));
  }
}
BENCHMARK(BM_SampleSpectrum)->RangeMultiplier(2)->Range(2, 32);

static void BM_EstimateCumulants(benchmark::State& state) {
  const auto batch = sample_batch(3, 3, 100000, 5);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_cumulants(batch.values, 6));
}
BENCHMARK(BM_EstimateCumulants)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
