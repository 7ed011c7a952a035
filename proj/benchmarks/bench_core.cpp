#include <benchmark/benchmark.h>

#include <cmath>

#include "grushin/grid.hpp"
#include "grushin/nonlocal.hpp"
#include "grushin/solver.hpp"
#include "grushin/variational.hpp"

using namespace grushin;

namespace {

const ProblemParams kParams{1, 2, 1.0, 1.0, 2.0};

void BM_KernelValue(benchmark::State& state) {
  const KernelEvaluator ev(kParams, static_cast<int>(state.range(0)));
  double r = 0.7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.value(r, 1.1, 1.3, 0.4));
    r += 1e-9;
  }
}
BENCHMARK(BM_KernelValue)->Arg(16)->Arg(32)->Arg(64);

void BM_KernelValueGraded(benchmark::State& state) {
  const KernelEvaluator ev(kParams, 32);
  for (auto _ : state) benchmark::DoNotOptimize(ev.value_graded(1.0, 1.0, 1.01, 1.02));
}
BENCHMARK(BM_KernelValueGraded);

void BM_KernelBuild(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridPtr g = build_grid(n, n, 8.0, 8.0, kParams);
  for (auto _ : state) benchmark::DoNotOptimize(KernelMatrix::build(g, kParams, {}));
}
BENCHMARK(BM_KernelBuild)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Convolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridPtr g = build_grid(n, n, 8.0, 8.0, kParams);
  KernelOptions opt;
  opt.matrix_free = state.range(1) != 0;
  const KernelMatrix k = KernelMatrix::build(g, kParams, opt);
  const RadialField f = abs_pow(standard_bump(g, kParams), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(k, f));
}
BENCHMARK(BM_Convolve)
    ->Args({24, 0})
    ->Args({48, 0})
    ->Args({24, 1})
    ->Unit(benchmark::kMillisecond);

void BM_Laplacian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const GridPtr g = build_grid(n, n, 12.0, 12.0, kParams);
  const RadialField u = standard_bump(g, kParams);
  for (auto _ : state) benchmark::DoNotOptimize(apply_grushin_laplacian(u, kParams));
}
BENCHMARK(BM_Laplacian)->Arg(64)->Arg(128)->Arg(256);

void BM_EnergyAndGradient(benchmark::State& state) {
  const GridPtr g = build_grid(48, 48, 12.0, 12.0, kParams);
  const KernelMatrix k = KernelMatrix::build(g, kParams, {});
  const RadialField u = standard_bump(g, kParams);
  for (auto _ : state) benchmark::DoNotOptimize(energy_and_gradient(u, k, kParams));
}
BENCHMARK(BM_EnergyAndGradient)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
