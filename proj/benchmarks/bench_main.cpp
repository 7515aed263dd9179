#include <benchmark/benchmark.h>

#include "sqfn/convolve.hpp"
#include "sqfn/hardy.hpp"
#include "sqfn/lemma.hpp"
#include "sqfn/squarefn.hpp"
#include "sqfn/testfields.hpp"

using namespace sqfn;

namespace {

Field atom(int N) { return mean_zero_atom(GridSpec(2, N, 1.0), std::vector<double>{}, 0.125); }

void BM_BallAverage(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  Field f = atom(N);
  const double t = 8.0 / N;
  ball_average(f, t);  // warm the symbol cache and FFT plan
  for (auto _ : state) benchmark::DoNotOptimize(ball_average(f, t));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.size()));
}
BENCHMARK(BM_BallAverage)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_BallSymbolTable(benchmark::State& state) {
  GridSpec g(2, static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(BallSymbolTable(g, 0.1, SymbolMode::Discrete));
}
BENCHMARK(BM_BallSymbolTable)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SquareFunction(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  Field f = atom(N);
  auto scales = ScaleGrid::make(f.grid(), 2.0 / N, 1.0 / 6, 4, 3);
  for (auto _ : state) benchmark::DoNotOptimize(e_tilde(f, 1.5, k, scales));
  state.counters["scales"] = static_cast<double>(scales.size());
}
BENCHMARK(BM_SquareFunction)->Args({256, 1})->Args({256, 3})->Args({512, 1})->Unit(benchmark::kMillisecond);

void BM_H1Norm(benchmark::State& state) {
  Field f = atom(256);
  auto scales = ScaleGrid::make(f.grid(), 2.0 / 256, 0.5, 4);
  for (auto _ : state) benchmark::DoNotOptimize(h1_norm(f, scales));
}
BENCHMARK(BM_H1Norm)->Unit(benchmark::kMillisecond);

void BM_ProfileTable(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(SmoothedRieszTable(1.5, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_ProfileTable)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_TwoPointIntegral(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const LemmaContext ctx(n == 2 ? 1.5 : 2.0, n);
  std::vector<double> u(n, 0.0), v(n, 0.0);
  u[0] = 3.0;
  v[0] = 0.05;
  v[1] = 0.02;
  const double tol = n == 2 ? 1e-9 : 1e-6;
  for (auto _ : state) benchmark::DoNotOptimize(f_dimensionless(ctx, u, v, tol));
}
BENCHMARK(BM_TwoPointIntegral)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
