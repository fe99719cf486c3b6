#include <benchmark/benchmark.h>

#include <random>

#include "kpframe/embedding.hpp"
#include "kpframe/pipeline.hpp"

namespace {

using namespace kpf;

void BM_DeriveMaurerCartan(benchmark::State& state) {
  const int k = int(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(derive_maurer_cartan(k));
}
BENCHMARK(BM_DeriveMaurerCartan)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_StageOneGeneration(benchmark::State& state) {
  const int k = int(state.range(0));
  const int workers = int(state.range(1));
  std::size_t raw = 0;
  for (auto _ : state) raw = generate_stage_one(k, workers).raw;
  state.counters["equations"] = double(raw);
}
BENCHMARK(BM_StageOneGeneration)
    ->Args({2, 1})
    ->Args({4, 1})
    ->Args({8, 1})
    ->Args({8, 4})
    ->Unit(benchmark::kMillisecond);

void BM_FullReplay(benchmark::State& state) {
  const PolyMatrix standard = derive_maurer_cartan(2);
  const ConnectionMatrix golden = tabulated_final_frame(2);
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(2, standard, golden).verdict.match);
}
BENCHMARK(BM_FullReplay)->Unit(benchmark::kMillisecond);

void BM_PolynomialProduct(benchmark::State& state) {
  Polynomial x;
  Polynomial y;
  for (int i = 1; i <= int(state.range(0)); ++i) {
    x += Polynomial::variable(Symbol::generic(i)) * Rational(i);
    y += Polynomial::variable(Symbol::generic(100 + i)) * Rational(i, 3);
  }
  for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_PolynomialProduct)->Arg(8)->Arg(64);

void BM_HeightCriticalPoints(benchmark::State& state) {
  const int k = int(state.range(0));
  std::mt19937_64 rng(7);
  const HermitianPoint<double> xi = random_hermitian(k, rng);
  for (auto _ : state) benchmark::DoNotOptimize(height_critical_points(k, xi));
}
BENCHMARK(BM_HeightCriticalPoints)->Arg(1)->Arg(2)->Arg(4);

}  // namespace
BENCHMARK_MAIN();
