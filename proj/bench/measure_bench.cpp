// Serial reference vs OpenMP measurement kernel over a swept grid.

#include <benchmark/benchmark.h>

#include "fptp/harness.hpp"
#include "fptp/measure_kernels.hpp"

namespace {

struct Fixture {
  fptp::Collection collection;
  fptp::ScenarioSetup setup;
  fptp::ExperimentGrid grid;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    auto collection = fptp::generate_dataset(50000, fptp::Distribution::kUniformDistinct, 7);
    auto setup = fptp::make_scenario(collection, fptp::Scenario::kCovering);
    fptp::SweepOptions opts;
    opts.dim = 20;
    opts.seed = 42;
    auto grid = fptp::sweep(collection, setup, fptp::OptimizerVariant::kVanilla, opts);
    return Fixture{std::move(collection), std::move(setup), std::move(grid)};
  }();
  return f;
}

void BM_MeasureSerial(benchmark::State& state) {
  const auto& f = fixture();
  fptp::MeasureOptions options;
  for (auto _ : state) {
    fptp::ExperimentGrid grid = f.grid;
    fptp::measure_grid_serial(grid, f.collection, f.setup, options);
    benchmark::DoNotOptimize(grid.cells().data());
  }
}
BENCHMARK(BM_MeasureSerial)->Unit(benchmark::kMillisecond);

void BM_MeasureParallel(benchmark::State& state) {
  const auto& f = fixture();
  fptp::MeasureOptions options;
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    fptp::ExperimentGrid grid = f.grid;
    fptp::measure_grid_parallel(grid, f.collection, f.setup, options, jobs);
    benchmark::DoNotOptimize(grid.cells().data());
  }
}
BENCHMARK(BM_MeasureParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  const auto& f = fixture();
  fptp::SweepOptions opts;
  opts.dim = 20;
  opts.seed = 42;
  for (auto _ : state) {
    auto grid = fptp::sweep(f.collection, f.setup, fptp::OptimizerVariant::kMod, opts);
    benchmark::DoNotOptimize(grid.cells().data());
  }
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
