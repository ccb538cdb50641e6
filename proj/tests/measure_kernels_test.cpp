#include <gtest/gtest.h>

#include "fptp/errors.hpp"
#include "fptp/measure_kernels.hpp"

namespace fptp {
namespace {

void expect_same_measurements(const ExperimentGrid& a, const ExperimentGrid& b) {
  ASSERT_EQ(a.cells().size(), b.cells().size());
  for (std::size_t k = 0; k < a.cells().size(); ++k) {
    const auto& pa = a.cells()[k].per_plan;
    const auto& pb = b.cells()[k].per_plan;
    ASSERT_EQ(pa.size(), pb.size());
    for (const auto& [id, t] : pa) {
      ASSERT_EQ(pb.count(id), 1u);
      EXPECT_EQ(t.samples, pb.at(id).samples);
      EXPECT_EQ(t.kept, pb.at(id).kept);
      EXPECT_EQ(t.mean, pb.at(id).mean);
    }
  }
}

class KernelTest : public ::testing::TestWithParam<Scenario> {
 protected:
  Collection coll_ = generate_dataset(8000, Distribution::kUniformDistinct, 21);
};

TEST_P(KernelTest, ParallelMatchesSerial) {
  auto setup = make_scenario(coll_, GetParam());
  SweepOptions sweep_opts;
  sweep_opts.dim = 9;
  sweep_opts.seed = 4;
  const auto swept = sweep(coll_, setup, OptimizerVariant::kMod, sweep_opts);

  for (const NoiseModel& noise : {NoiseModel{}, NoiseModel{0.05, 0.1, 20.0, 3}}) {
    MeasureOptions opts;
    opts.noise = noise;
    ExperimentGrid serial = swept;
    measure_grid_serial(serial, coll_, setup, opts);
    for (int jobs : {1, 2, 4, 7}) {
      ExperimentGrid parallel = swept;
      measure_grid_parallel(parallel, coll_, setup, opts, jobs);
      expect_same_measurements(serial, parallel);
    }
    ExperimentGrid dispatched = swept;
    opts.jobs = 3;
    measure_grid(dispatched, coll_, setup, opts);
    expect_same_measurements(serial, dispatched);
  }
}

INSTANTIATE_TEST_SUITE_P(Scenarios, KernelTest,
                         ::testing::Values(Scenario::kBothIndexed, Scenario::kSingleIndex,
                                           Scenario::kCovering));

TEST(Kernel, UnvisitedCellsStayEmpty) {
  auto coll = generate_dataset(100, Distribution::kUniformDistinct, 1);
  auto setup = make_scenario(coll, Scenario::kBothIndexed);
  ExperimentGrid grid(3);
  measure_grid_parallel(grid, coll, setup, MeasureOptions{}, 2);
  for (const auto& cell : grid.cells()) EXPECT_TRUE(cell.per_plan.empty());
}

TEST(Kernel, ErrorsPropagateFromWorkers) {
  auto coll = generate_dataset(100, Distribution::kUniformDistinct, 1);
  auto setup = make_scenario(coll, Scenario::kBothIndexed);
  SweepOptions sweep_opts;
  sweep_opts.dim = 3;
  auto grid = sweep(coll, setup, OptimizerVariant::kVanilla, sweep_opts);
  MeasureOptions bad;
  bad.reps = 0;
  EXPECT_THROW(measure_grid_parallel(grid, coll, setup, bad, 2), Error);
  EXPECT_THROW(measure_grid_serial(grid, coll, setup, bad), Error);
}

}  // namespace
}  // namespace fptp
