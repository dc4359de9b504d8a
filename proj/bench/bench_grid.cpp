// Serial reference vs OpenMP grid evaluation.

#include <benchmark/benchmark.h>

#include "nlgeo/tables.hpp"

namespace {

void grid_args(benchmark::internal::Benchmark* b) {
  for (int kind = 0; kind < 4; ++kind) b->Args({kind, 30});
  b->Unit(benchmark::kMillisecond);
}

nlgeo::DistanceKind kind_of(const benchmark::State& state) {
  static const nlgeo::DistanceKind kinds[] = {nlgeo::DistanceKind::HilbertSchmidt, nlgeo::DistanceKind::Trace,
                                              nlgeo::DistanceKind::Hellinger, nlgeo::DistanceKind::RelativeEntropy};
  return kinds[state.range(0)];
}

void BM_GridSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(nlgeo::bd_grid_serial(kind_of(state), int(state.range(1))));
  state.SetLabel(std::string(nlgeo::short_name(kind_of(state))));
}

void BM_GridParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(nlgeo::bd_grid(kind_of(state), int(state.range(1))));
  state.SetLabel(std::string(nlgeo::short_name(kind_of(state))));
}

}  // namespace

BENCHMARK(BM_GridSerial)->Apply(grid_args);
BENCHMARK(BM_GridParallel)->Apply(grid_args);

BENCHMARK_MAIN();
