#include <benchmark/benchmark.h>

#include "qfslice/raster.hpp"

namespace {

qfslice::SliceSpec bench_spec(int res) {
  qfslice::SliceSpec s;
  s.trA = 2.5;
  s.center = {2.5, 0.0};
  s.width = 6.0;
  s.resolution = res;
  return s;
}

void BM_RenderSerial(benchmark::State& state) {
  const auto spec = bench_spec(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto grid = qfslice::render_serial(spec);
    benchmark::DoNotOptimize(grid.cells.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_RenderParallel(benchmark::State& state) {
  const auto spec = bench_spec(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto grid = qfslice::render(spec);
    benchmark::DoNotOptimize(grid.cells.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

} // namespace

BENCHMARK(BM_RenderSerial)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RenderParallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
