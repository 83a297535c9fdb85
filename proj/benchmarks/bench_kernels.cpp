#include <benchmark/benchmark.h>

#include <numbers>

#include "dmnls/dmnls.hpp"

using namespace dmnls;

namespace {

GridPtr grid_for(const benchmark::State& state) {
  return make_grid(static_cast<std::size_t>(state.range(0)), 64.0 * std::numbers::pi);
}

void BM_Propagate(benchmark::State& state) {
  const Field u = gaussian(grid_for(state));
  for (auto _ : state) benchmark::DoNotOptimize(propagate(u, 0.37));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Propagate)->RangeMultiplier(2)->Range(1024, 16384)->Complexity();

void BM_NonlinearityUnit(benchmark::State& state) {
  const auto g = grid_for(state);
  const Field u = gaussian(g);
  const AveragedNonlinearity op(g, NonlinearitySpec::unit(11.0));
  for (auto _ : state) benchmark::DoNotOptimize(op.evaluate(u));
}
BENCHMARK(BM_NonlinearityUnit)->Arg(1024)->Arg(4096);

void BM_NonlinearityLine(benchmark::State& state) {
  const auto g = grid_for(state);
  const Field u = gaussian(g);
  NonlinearitySpec spec = NonlinearitySpec::line(9.0, 20.0);
  spec.tail_closure = true;
  const AveragedNonlinearity op(g, spec);
  for (auto _ : state) benchmark::DoNotOptimize(op.evaluate(u));
}
BENCHMARK(BM_NonlinearityLine)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_Rk4Step(benchmark::State& state) {
  const auto g = grid_for(state);
  const Field u = gaussian(g).to_fourier();
  const AveragedNonlinearity op(g, NonlinearitySpec::unit(11.0));
  for (auto _ : state) benchmark::DoNotOptimize(rk4_step(u, 1e-3, op));
}
BENCHMARK(BM_Rk4Step)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
