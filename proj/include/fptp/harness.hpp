#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fptp/document_store.hpp"
#include "fptp/executor.hpp"
#include "fptp/optimizer.hpp"
#include "fptp/plans.hpp"
#include "fptp/random.hpp"

namespace fptp {

// Physical designs:
//   both-indexed  {A_1, B_1}
//   single-index  {B_1}
//   covering      {A_1, B_1, A_1_B_1}, every query projected onto {A, B}
enum class Scenario { kBothIndexed, kSingleIndex, kCovering };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view text);

struct ScenarioSetup {
  Scenario scenario = Scenario::kBothIndexed;
  IndexCatalog catalog;
  std::optional<Projection> projection;
};

ScenarioSetup make_scenario(const Collection& collection, Scenario scenario);

// lowA <= A < highA && lowB <= B < highB, with the scenario's projection.
Query make_query(const ScenarioSetup& setup, RangePredicate on_a, RangePredicate on_b);

// Every plan a hint can force in this scenario (COLLSCAN always included).
std::vector<PlanId> forced_plan_set(const ScenarioSetup& setup);

enum class TimingMode { kSimulated, kWallClock };

std::string_view to_string(TimingMode m);
TimingMode parse_timing_mode(std::string_view text);

// Optional perturbation of simulated timings, for exercising the outlier
// filter end to end. Each sample is scaled by exp(jitter * z), z ~ N(0,1), and
// with spike_probability further multiplied by spike_factor. Samples are keyed
// by (seed, cell, plan, rep) so results do not depend on evaluation order.
struct NoiseModel {
  double jitter = 0.0;
  double spike_probability = 0.0;
  double spike_factor = 1.0;
  std::uint64_t seed = 0;

  bool enabled() const { return jitter > 0.0 || spike_probability > 0.0; }
  double apply(double time, std::uint64_t cell_key, std::uint64_t plan_key,
               std::uint64_t rep) const;
  bool operator==(const NoiseModel&) const = default;
};

struct MeasureOptions {
  int reps = 10;
  CostModel cost;
  TimingMode timing = TimingMode::kSimulated;
  NoiseModel noise;
  int jobs = 1;
};

struct PlanTiming {
  std::vector<double> samples;  // raw, in repetition order
  std::vector<double> kept;     // after the 1.5 IQR filter
  double mean = 0.0;            // of `kept`
};

using PlanTimings = std::map<PlanId, PlanTiming>;

struct GridCell {
  int i = 0;
  int j = 0;
  bool visited = false;
  double e_a = 0.0;
  double e_b = 0.0;
  Query query;
  PlanId chosen;
  PlanTimings per_plan;
  std::optional<PlanId> optimal;
  double ratio = 1.0;
};

struct Provenance {
  Scenario scenario = Scenario::kBothIndexed;
  OptimizerVariant variant = OptimizerVariant::kVanilla;
  std::size_t n = 0;
  std::uint64_t dataset_fingerprint = 0;
  int dim = 50;
  std::uint64_t seed = 0;
  CostModel cost;
  RaceKnobs knobs;
  int reps = 10;
  TimingMode timing = TimingMode::kSimulated;
  NoiseModel noise;
  std::optional<PlanId> cache_primed;
  CacheMode cache_mode = CacheMode::kOff;

  bool operator==(const Provenance&) const = default;
};

// D x D cells; x (i) buckets e_A, y (j) buckets e_B.
class ExperimentGrid {
 public:
  ExperimentGrid() = default;
  explicit ExperimentGrid(int dim);

  int dim() const { return dim_; }
  GridCell& cell(int i, int j) { return cells_[static_cast<std::size_t>(j * dim_ + i)]; }
  const GridCell& cell(int i, int j) const {
    return cells_[static_cast<std::size_t>(j * dim_ + i)];
  }
  std::vector<GridCell>& cells() { return cells_; }
  const std::vector<GridCell>& cells() const { return cells_; }
  std::size_t visited_count() const;

  Provenance provenance;

 private:
  int dim_ = 0;
  std::vector<GridCell> cells_;
};

struct SummaryMetrics {
  double accuracy = 0.0;
  double impact_pct = 0.0;
};

// Width uniform on [1, max - min + 1], low uniform on [min, max - width + 1];
// returns [low, low + width).
RangePredicate rand_range_predicate(std::string field, Value min, Value max, Rng& rng);

// min(floor(e * dim), dim - 1)
int map_selectivity_to_cell(double e, int dim);

struct SweepOptions {
  int dim = 50;
  std::uint64_t seed = 0;
  RaceKnobs knobs;
  CostModel cost;
  // After this many consecutive draws landing on visited cells, the remaining
  // cells are filled by constructing queries with the required selectivities.
  std::uint64_t max_consecutive_rejections = 1'000'000;
  // Plan-cache experiment: seed the cache with this plan before the sweep.
  std::optional<PlanId> cache_primed;
  CacheMode cache_mode = CacheMode::kOnNoReplan;
};

// Random-query fill of the selectivity grid, recording the optimizer's choice
// per cell. Plan caching is off unless cache_primed is set.
ExperimentGrid sweep(const Collection& collection, const ScenarioSetup& setup,
                     OptimizerVariant variant, const SweepOptions& options);

// Quantile of an ascending sample by linear interpolation between order
// statistics (R type 7).
double quantile_r7(std::span<const double> sorted, double p);

// Drops samples outside [Q1 - 1.5 IQR, Q3 + 1.5 IQR]; keeps input order.
std::vector<double> filter_outliers(std::span<const double> samples);

// Hint-forces every plan of the scenario `reps` times and summarizes each with
// the outlier-filtered mean. `cell_key` only seeds the noise model.
PlanTimings measure_all_plans(const Query& query, const Collection& collection,
                              const ScenarioSetup& setup, const MeasureOptions& options,
                              std::uint64_t cell_key = 0);

// Optimal plan, ratio, accuracy and impact for every visited, measured cell.
// Idempotent.
SummaryMetrics finalize(ExperimentGrid& grid);

struct ExperimentResult {
  ExperimentGrid grid;
  SummaryMetrics metrics;
};

// sweep -> measure -> finalize.
ExperimentResult run_experiment(const Collection& collection, const ScenarioSetup& setup,
                                OptimizerVariant variant, const SweepOptions& sweep_options,
                                const MeasureOptions& measure_options);

// As run_experiment with the cache primed with `primed_plan` (mode from
// sweep_options.cache_mode). Throws UnknownPlanError if the plan cannot run in
// this scenario.
ExperimentResult cache_experiment(const Collection& collection, const ScenarioSetup& setup,
                                  OptimizerVariant variant, const PlanId& primed_plan,
                                  SweepOptions sweep_options,
                                  const MeasureOptions& measure_options);

}  // namespace fptp
