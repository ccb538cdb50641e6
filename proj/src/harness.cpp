#include "fptp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "fptp/errors.hpp"
#include "fptp/measure_kernels.hpp"

namespace fptp {

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::kBothIndexed: return "both-indexed";
    case Scenario::kSingleIndex: return "single-index";
    case Scenario::kCovering: return "covering";
  }
  return "?";
}

Scenario parse_scenario(std::string_view text) {
  for (auto s : {Scenario::kBothIndexed, Scenario::kSingleIndex, Scenario::kCovering}) {
    if (to_string(s) == text) return s;
  }
  throw Error("unknown scenario '" + std::string(text) +
              "' (expected both-indexed, single-index or covering)");
}

ScenarioSetup make_scenario(const Collection& collection, Scenario scenario) {
  ScenarioSetup setup;
  setup.scenario = scenario;
  switch (scenario) {
    case Scenario::kBothIndexed:
      setup.catalog.add(build_index(collection, {"A"}));
      setup.catalog.add(build_index(collection, {"B"}));
      break;
    case Scenario::kSingleIndex:
      setup.catalog.add(build_index(collection, {"B"}));
      break;
    case Scenario::kCovering:
      setup.catalog.add(build_index(collection, {"A"}));
      setup.catalog.add(build_index(collection, {"B"}));
      setup.catalog.add(build_index(collection, {"A", "B"}));
      setup.projection = Projection{{"A", "B"}, true};
      break;
  }
  return setup;
}

Query make_query(const ScenarioSetup& setup, RangePredicate on_a, RangePredicate on_b) {
  Query q;
  q.predicates = {std::move(on_a), std::move(on_b)};
  q.projection = setup.projection;
  return q;
}

std::vector<PlanId> forced_plan_set(const ScenarioSetup& setup) {
  const Query probe = make_query(setup, {"A", 0, 1}, {"B", 0, 1});
  return executable_plans(probe, setup.catalog);
}

std::string_view to_string(TimingMode m) {
  return m == TimingMode::kSimulated ? "sim" : "wall";
}

TimingMode parse_timing_mode(std::string_view text) {
  if (text == "sim") return TimingMode::kSimulated;
  if (text == "wall") return TimingMode::kWallClock;
  throw Error("unknown timing mode '" + std::string(text) + "' (expected sim or wall)");
}

double NoiseModel::apply(double time, std::uint64_t cell_key, std::uint64_t plan_key,
                         std::uint64_t rep) const {
  if (!enabled()) return time;
  Rng rng(mix_seed(mix_seed(seed, cell_key), mix_seed(plan_key, rep)));
  // Box-Muller; uniform_unit is in [0, 1) so shift the first draw off zero.
  const double u1 = 1.0 - uniform_unit(rng);
  const double u2 = uniform_unit(rng);
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  double sample = time * std::exp(jitter * z);
  if (uniform_unit(rng) < spike_probability) sample *= spike_factor;
  return sample;
}

ExperimentGrid::ExperimentGrid(int dim)
    : dim_(dim), cells_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
  if (dim <= 0) throw Error("grid dimension must be positive");
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      cell(i, j).i = i;
      cell(i, j).j = j;
    }
  }
}

std::size_t ExperimentGrid::visited_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [](const GridCell& c) { return c.visited; }));
}

RangePredicate rand_range_predicate(std::string field, Value min, Value max, Rng& rng) {
  if (max < min) throw Error("empty value domain for field '" + field + "'");
  const Value domain = max - min + 1;
  const Value width = uniform_between(rng, 1, domain);
  const Value low = uniform_between(rng, min, max - width + 1);
  return RangePredicate{std::move(field), low, low + width};
}

int map_selectivity_to_cell(double e, int dim) {
  const int cell = static_cast<int>(std::floor(e * dim));
  return std::clamp(cell, 0, dim - 1);
}

namespace {

// Sorted copy of one field; exact range counts by binary search.
class SortedColumn {
 public:
  SortedColumn(const Collection& collection, std::string_view field) {
    const std::size_t pos = collection.field_position(field);
    values_.reserve(collection.size());
    for (const auto& doc : collection.documents()) values_.push_back(doc.values[pos]);
    std::sort(values_.begin(), values_.end());
  }

  std::size_t count(const RangePredicate& p) const {
    if (p.high <= p.low) return 0;
    auto lo = std::lower_bound(values_.begin(), values_.end(), p.low);
    auto hi = std::lower_bound(values_.begin(), values_.end(), p.high);
    return static_cast<std::size_t>(hi - lo);
  }

  Value min() const { return values_.front(); }
  Value max() const { return values_.back(); }
  std::size_t size() const { return values_.size(); }
  Value at(std::size_t k) const { return values_[k]; }

 private:
  std::vector<Value> values_;
};

// Predicate on `field` matching a count whose selectivity lands in bucket
// `target`; nullopt if none was found.
std::optional<RangePredicate> construct_predicate(const SortedColumn& column,
                                                  std::string_view field, int target,
                                                  int dim, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(column.size());
  const auto d = static_cast<std::uint64_t>(dim);
  const auto t = static_cast<std::uint64_t>(target);
  std::uint64_t lo_k = std::max<std::uint64_t>(1, (t * n + d - 1) / d);
  std::uint64_t hi_k = target == dim - 1 ? n : ((t + 1) * n + d - 1) / d - 1;
  if (lo_k > hi_k) return std::nullopt;
  for (int attempt = 0; attempt < 64; ++attempt) {
    const auto k = static_cast<std::uint64_t>(
        uniform_between(rng, static_cast<Value>(lo_k), static_cast<Value>(hi_k)));
    const auto start = static_cast<std::size_t>(
        uniform_between(rng, 0, static_cast<Value>(n - k)));
    RangePredicate p{std::string(field), column.at(start), column.at(start + k - 1) + 1};
    const double e = static_cast<double>(column.count(p)) / static_cast<double>(n);
    if (map_selectivity_to_cell(e, dim) == target) return p;
  }
  return std::nullopt;
}

}  // namespace

ExperimentGrid sweep(const Collection& collection, const ScenarioSetup& setup,
                     OptimizerVariant variant, const SweepOptions& options) {
  if (collection.empty()) throw EmptyCollectionError("cannot sweep an empty collection");
  ExperimentGrid grid(options.dim);
  Provenance& prov = grid.provenance;
  prov.scenario = setup.scenario;
  prov.variant = variant;
  prov.n = collection.size();
  prov.dataset_fingerprint = dataset_fingerprint(collection);
  prov.dim = options.dim;
  prov.seed = options.seed;
  prov.cost = options.cost;
  prov.knobs = options.knobs;
  prov.cache_primed = options.cache_primed;
  prov.cache_mode = options.cache_primed ? options.cache_mode : CacheMode::kOff;

  const SortedColumn col_a(collection, "A");
  const SortedColumn col_b(collection, "B");
  const double n = static_cast<double>(collection.size());

  PlanCache cache;
  PlanCache* cache_ptr = nullptr;
  if (options.cache_primed) {
    const Query probe = make_query(setup, {"A", 0, 1}, {"B", 0, 1});
    cache.prime(shape_of(probe), *options.cache_primed, options.knobs.max_results);
    cache_ptr = &cache;
  }

  auto record = [&](GridCell& cell, RangePredicate pa, RangePredicate pb, double ea,
                    double eb) {
    cell.query = make_query(setup, std::move(pa), std::move(pb));
    cell.e_a = ea;
    cell.e_b = eb;
    const OptimizeResult result = optimize(cell.query, collection, setup.catalog, variant,
                                           options.knobs, options.cost, cache_ptr,
                                           prov.cache_mode);
    cell.chosen = result.chosen;
    cell.visited = true;
  };

  Rng rng(options.seed);
  const std::size_t total = grid.cells().size();
  std::size_t visited = 0;
  std::uint64_t rejections = 0;
  while (visited < total && rejections < options.max_consecutive_rejections) {
    RangePredicate pa = rand_range_predicate("A", col_a.min(), col_a.max(), rng);
    RangePredicate pb = rand_range_predicate("B", col_b.min(), col_b.max(), rng);
    const double ea = static_cast<double>(col_a.count(pa)) / n;
    const double eb = static_cast<double>(col_b.count(pb)) / n;
    GridCell& cell =
        grid.cell(map_selectivity_to_cell(ea, options.dim), map_selectivity_to_cell(eb, options.dim));
    if (cell.visited) {
      ++rejections;
      continue;
    }
    rejections = 0;
    record(cell, std::move(pa), std::move(pb), ea, eb);
    ++visited;
  }

  if (visited < total) {
    for (auto& cell : grid.cells()) {
      if (cell.visited) continue;
      auto pa = construct_predicate(col_a, "A", cell.i, options.dim, rng);
      auto pb = construct_predicate(col_b, "B", cell.j, options.dim, rng);
      if (!pa || !pb) continue;  // not reachable on this data; stays unvisited
      const double ea = static_cast<double>(col_a.count(*pa)) / n;
      const double eb = static_cast<double>(col_b.count(*pb)) / n;
      record(cell, std::move(*pa), std::move(*pb), ea, eb);
    }
  }
  return grid;
}

double quantile_r7(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error("quantile of an empty sample");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted[sorted.size() - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<double> filter_outliers(std::span<const double> samples) {
  if (samples.empty()) return {};
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double q1 = quantile_r7(sorted, 0.25);
  const double q3 = quantile_r7(sorted, 0.75);
  const double iqr = q3 - q1;
  const double low_fence = q1 - 1.5 * iqr;
  const double high_fence = q3 + 1.5 * iqr;
  std::vector<double> kept;
  kept.reserve(samples.size());
  for (double x : samples) {
    if (x < low_fence || x > high_fence) continue;
    kept.push_back(x);
  }
  return kept;
}

PlanTimings measure_all_plans(const Query& query, const Collection& collection,
                              const ScenarioSetup& setup, const MeasureOptions& options,
                              std::uint64_t cell_key) {
  if (options.reps < 1) throw Error("at least one repetition is required");
  PlanTimings timings;
  const auto plans = executable_plans(query, setup.catalog);
  for (std::size_t p = 0; p < plans.size(); ++p) {
    Query hinted = query;
    hinted.hint = plans[p];
    const CandidatePlan plan =
        enumerate_candidates(hinted, setup.catalog, OptimizerVariant::kVanilla).front();

    PlanTiming timing;
    timing.samples.reserve(static_cast<std::size_t>(options.reps));
    if (options.timing == TimingMode::kSimulated) {
      // Simulated time is a pure function of the plan, so one execution
      // stands in for every repetition.
      PlanExecution exec(plan, collection, setup.catalog, options.cost);
      while (exec.work() != WorkState::kEof) {
      }
      const double base = exec.sim_time();
      for (int rep = 0; rep < options.reps; ++rep) {
        timing.samples.push_back(
            options.noise.apply(base, cell_key, p, static_cast<std::uint64_t>(rep)));
      }
    } else {
      for (int rep = 0; rep < options.reps; ++rep) {
        PlanExecution exec(plan, collection, setup.catalog, options.cost);
        const auto start = std::chrono::steady_clock::now();
        run_to_completion(exec);
        const auto stop = std::chrono::steady_clock::now();
        timing.samples.push_back(std::chrono::duration<double, std::micro>(stop - start).count());
      }
    }
    timing.kept = filter_outliers(timing.samples);
    if (timing.kept.empty()) {
      throw Error("internal: outlier filter removed every sample of " + plans[p].to_string());
    }
    timing.mean = std::accumulate(timing.kept.begin(), timing.kept.end(), 0.0) /
                  static_cast<double>(timing.kept.size());
    timings.emplace(plans[p], std::move(timing));
  }
  return timings;
}

SummaryMetrics finalize(ExperimentGrid& grid) {
  std::size_t counted = 0;
  std::size_t correct = 0;
  double slowdown_sum = 0.0;
  for (auto& cell : grid.cells()) {
    if (!cell.visited || cell.per_plan.empty()) continue;
    auto chosen_it = cell.per_plan.find(cell.chosen);
    if (chosen_it == cell.per_plan.end()) {
      throw Error("cell (" + std::to_string(cell.i) + "," + std::to_string(cell.j) +
                  ") has no measurement for chosen plan " + cell.chosen.to_string());
    }
    const double chosen_mean = chosen_it->second.mean;
    double best = chosen_mean;
    for (const auto& [id, t] : cell.per_plan) best = std::min(best, t.mean);

    if (chosen_mean == best) {
      cell.optimal = cell.chosen;
      cell.ratio = 1.0;
    } else {
      for (const auto& [id, t] : cell.per_plan) {
        if (t.mean == best) {
          cell.optimal = id;
          break;
        }
      }
      cell.ratio = chosen_mean / best;
    }
    ++counted;
    if (*cell.optimal == cell.chosen) ++correct;
    slowdown_sum += (cell.ratio - 1.0) * 100.0;
  }
  SummaryMetrics m;
  if (counted > 0) {
    m.accuracy = static_cast<double>(correct) / static_cast<double>(counted);
    m.impact_pct = slowdown_sum / static_cast<double>(counted);
  }
  return m;
}

ExperimentResult run_experiment(const Collection& collection, const ScenarioSetup& setup,
                                OptimizerVariant variant, const SweepOptions& sweep_options,
                                const MeasureOptions& measure_options) {
  SweepOptions opts = sweep_options;
  opts.cost = measure_options.cost;
  ExperimentResult result{sweep(collection, setup, variant, opts), {}};
  Provenance& prov = result.grid.provenance;
  prov.reps = measure_options.reps;
  prov.timing = measure_options.timing;
  prov.noise = measure_options.noise;
  measure_grid(result.grid, collection, setup, measure_options);
  result.metrics = finalize(result.grid);
  return result;
}

ExperimentResult cache_experiment(const Collection& collection, const ScenarioSetup& setup,
                                  OptimizerVariant variant, const PlanId& primed_plan,
                                  SweepOptions sweep_options,
                                  const MeasureOptions& measure_options) {
  Query probe = make_query(setup, {"A", 0, 1}, {"B", 0, 1});
  probe.hint = primed_plan;
  enumerate_candidates(probe, setup.catalog, variant);  // throws if not executable
  sweep_options.cache_primed = primed_plan;
  return run_experiment(collection, setup, variant, sweep_options, measure_options);
}

}  // namespace fptp
