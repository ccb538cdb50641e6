// fptpsim: dataset generation, plan-diagram experiments and explain output
// for the first-past-the-post plan racing simulator.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fptp/document_store.hpp"
#include "fptp/errors.hpp"
#include "fptp/harness.hpp"
#include "fptp/optimizer.hpp"
#include "fptp/viz.hpp"

namespace {

constexpr int kUsageExit = 2;
constexpr int kFailureExit = 1;

struct UsageError : fptp::Error {
  using fptp::Error::Error;
};

// Wraps a parse so malformed user strings surface as usage errors.
template <typename Fn>
auto as_usage(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const fptp::Error& e) {
    throw UsageError(e.what());
  }
}

fptp::CostModel parse_cost(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--cost expects c_seq,c_idx,c_fetch; got '" + text + "'");
    }
  }
  if (parts.size() != 3) throw UsageError("--cost expects three comma-separated numbers");
  fptp::CostModel cost{parts[0], parts[1], parts[2]};
  as_usage([&] {
    cost.validate();
    return 0;
  });
  return cost;
}

struct CommonOptions {
  std::string scenario = "both-indexed";
  std::string variant = "vanilla";
  std::string data;
  std::string cost;
  std::uint64_t works = 10000;
  std::uint64_t max_results = 101;
  double coll_fraction = 0.3;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--scenario", scenario, "both-indexed | single-index | covering")
        ->capture_default_str();
    cmd.add_option("--variant", variant, "vanilla | with-collscan | mod")->capture_default_str();
    cmd.add_option("--data", data, "Dataset CSV written by 'gen'")->required();
    cmd.add_option("--cost", cost, "Cost model c_seq,c_idx,c_fetch (default 1,1,4)");
    cmd.add_option("--works", works, "Race evaluation works")->capture_default_str();
    cmd.add_option("--max-results", max_results, "Race result limit")->capture_default_str();
    cmd.add_option("--coll-fraction", coll_fraction, "Race works as a fraction of N")
        ->capture_default_str();
  }

  fptp::RaceKnobs knobs() const {
    fptp::RaceKnobs k{works, coll_fraction, max_results};
    as_usage([&] {
      k.validate();
      return 0;
    });
    return k;
  }
  fptp::CostModel cost_model() const { return cost.empty() ? fptp::CostModel{} : parse_cost(cost); }
};

int cmd_gen(std::size_t n, const std::string& dist, std::uint64_t seed, const std::string& out) {
  const auto distribution = as_usage([&] { return fptp::parse_distribution(dist); });
  const fptp::Collection collection = fptp::generate_dataset(n, distribution, seed);
  fptp::save_dataset(collection, out);
  std::cout << "wrote " << collection.size() << " documents to " << out << "\n";
  return 0;
}

struct RunOptions {
  CommonOptions common;
  int dim = 50;
  std::uint64_t seed = 42;
  std::string out;
  std::string cache_primed;
  std::string cache_mode = "on-no-replan";
  int reps = 10;
  int jobs = 1;
  std::string timing = "sim";
  double noise_jitter = 0.0;
  double noise_spike_probability = 0.0;
  double noise_spike_factor = 1.0;
  std::uint64_t noise_seed = 0;
  double r_max = 4.0;
  bool svg = false;
};

int cmd_run(const RunOptions& o) {
  const auto scenario = as_usage([&] { return fptp::parse_scenario(o.common.scenario); });
  const auto variant = as_usage([&] { return fptp::parse_variant(o.common.variant); });
  const auto timing = as_usage([&] { return fptp::parse_timing_mode(o.timing); });
  std::optional<fptp::PlanId> primed;
  if (!o.cache_primed.empty()) {
    primed = as_usage([&] { return fptp::parse_plan_hint(o.cache_primed); });
  }
  const auto cache_mode = as_usage([&] { return fptp::parse_cache_mode(o.cache_mode); });
  if (primed && cache_mode == fptp::CacheMode::kOff) {
    throw UsageError("--cache-primed needs --cache-mode on or on-no-replan");
  }
  if (o.dim < 1) throw UsageError("--dim must be positive");
  if (o.reps < 1) throw UsageError("--reps must be positive");
  if (!(o.r_max > 1.0)) throw UsageError("--rmax must exceed 1");

  fptp::SweepOptions sweep;
  sweep.dim = o.dim;
  sweep.seed = o.seed;
  sweep.knobs = o.common.knobs();
  sweep.cache_mode = cache_mode;

  fptp::MeasureOptions measure;
  measure.reps = o.reps;
  measure.cost = o.common.cost_model();
  measure.timing = timing;
  measure.noise = {o.noise_jitter, o.noise_spike_probability, o.noise_spike_factor,
                   o.noise_seed};
  measure.jobs = o.jobs;

  const fptp::Collection collection = fptp::load_dataset(o.common.data);
  const fptp::ScenarioSetup setup = fptp::make_scenario(collection, scenario);

  fptp::ExperimentResult result =
      primed ? fptp::cache_experiment(collection, setup, variant, *primed, sweep, measure)
             : fptp::run_experiment(collection, setup, variant, sweep, measure);

  fptp::ReportOptions report;
  report.scale.r_max = o.r_max;
  report.svg = o.svg;
  const auto files = fptp::write_report(result.grid, result.metrics, o.out, report);

  std::cout << "scenario=" << fptp::to_string(scenario)
            << " variant=" << fptp::to_string(variant) << " n=" << collection.size()
            << " dim=" << o.dim << " visited=" << result.grid.visited_count() << "\n";
  for (const auto& p : {files.chosen_ppm, files.optimal_ppm, files.impact_ppm,
                        files.results_csv, files.summary_json}) {
    std::cout << "wrote " << p.string() << "\n";
  }
  for (const auto& p : files.extra) std::cout << "wrote " << p.string() << "\n";
  std::printf("accuracy=%.4f impact=%.4f\n", result.metrics.accuracy, result.metrics.impact_pct);
  return 0;
}

struct ExplainOptions {
  CommonOptions common;
  fptp::Value low_a = 0, high_a = 0, low_b = 0, high_b = 0;
  std::string hint;
};

int cmd_explain(const ExplainOptions& o) {
  const auto scenario = as_usage([&] { return fptp::parse_scenario(o.common.scenario); });
  const auto variant = as_usage([&] { return fptp::parse_variant(o.common.variant); });
  const auto knobs = o.common.knobs();
  const auto cost = o.common.cost_model();

  const fptp::Collection collection = fptp::load_dataset(o.common.data);
  const fptp::ScenarioSetup setup = fptp::make_scenario(collection, scenario);
  fptp::Query query = fptp::make_query(setup, {"A", o.low_a, o.high_a}, {"B", o.low_b, o.high_b});
  if (!o.hint.empty()) query.hint = as_usage([&] { return fptp::parse_plan_hint(o.hint); });

  const auto result = fptp::optimize(query, collection, setup.catalog, variant, knobs, cost);

  std::printf("scenario=%s variant=%s n=%zu\n", std::string(fptp::to_string(scenario)).c_str(),
              std::string(fptp::to_string(variant)).c_str(), collection.size());
  std::printf("query: %lld <= A < %lld (e_A=%.6f), %lld <= B < %lld (e_B=%.6f)\n",
              static_cast<long long>(o.low_a), static_cast<long long>(o.high_a),
              fptp::selectivity(collection, query.predicates[0], &setup.catalog),
              static_cast<long long>(o.low_b), static_cast<long long>(o.high_b),
              fptp::selectivity(collection, query.predicates[1], &setup.catalog));
  std::printf("shape: %s\n", fptp::shape_of(query).canonical.c_str());
  std::printf("candidates=%zu rounds=%llu max_works=%llu\n", result.candidates.size(),
              static_cast<unsigned long long>(result.rounds),
              static_cast<unsigned long long>(knobs.max_works(collection.size())));

  for (std::size_t k = 0; k < result.candidates.size(); ++k) {
    const auto& s = result.stats[k];
    const auto& sc = result.scores[k];
    std::printf("\n[%zu] %s\n", k, s.plan.to_string().c_str());
    fptp::Query hinted = query;
    hinted.hint = s.plan;
    const auto plan =
        fptp::enumerate_candidates(hinted, setup.catalog, variant).front();
    std::printf("    stages: %s\n", plan.describe().c_str());
    std::printf("    works=%llu results=%llu eof=%s fetch=%s\n",
                static_cast<unsigned long long>(s.works),
                static_cast<unsigned long long>(s.results), s.reached_eof ? "yes" : "no",
                s.has_fetch ? "yes" : "no");
    std::printf(
        "    score: base=%.1f productivity=%.10f tie_break_unit=%.10g no_fetch_bonus=%.10g "
        "no_sort_bonus=%.10g no_ixisect_bonus=%.10g eof_bonus=%.1f total=%.10f\n",
        sc.base, sc.productivity, sc.tie_break_unit, sc.no_fetch_bonus, sc.no_sort_bonus,
        sc.no_ixisect_bonus, sc.eof_bonus, sc.total);
  }
  std::printf("\nwinner: %s\n", result.chosen.to_string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-past-the-post plan racing simulator"};
  app.require_subcommand(1);

  std::size_t gen_n = 100000;
  std::string gen_dist = "uniform-distinct";
  std::uint64_t gen_seed = 7;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a dataset");
  gen->add_option("--n", gen_n, "Number of documents")->capture_default_str();
  gen->add_option("--dist", gen_dist, "uniform-distinct | uniform-with-repeats | zipfian")
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output CSV path")->required();

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Sweep the selectivity grid and write a report");
  run_opts.common.add_to(*run);
  run->add_option("--dim", run_opts.dim, "Grid dimension")->capture_default_str();
  run->add_option("--seed", run_opts.seed, "Query generator seed")->capture_default_str();
  run->add_option("--out", run_opts.out, "Output directory")->required();
  run->add_option("--cache-primed", run_opts.cache_primed,
                  "Prime the plan cache with COLLSCAN | IXSCAN_A | IXSCAN_B | IXSCAN_AB");
  run->add_option("--cache-mode", run_opts.cache_mode, "on | on-no-replan (with --cache-primed)")
      ->capture_default_str();
  run->add_option("--reps", run_opts.reps, "Measurements per plan")->capture_default_str();
  run->add_option("--jobs", run_opts.jobs, "Measurement threads")->capture_default_str();
  run->add_option("--timing", run_opts.timing, "sim | wall")->capture_default_str();
  run->add_option("--noise-jitter", run_opts.noise_jitter, "Log-normal jitter sigma");
  run->add_option("--noise-spike-prob", run_opts.noise_spike_probability, "Spike probability");
  run->add_option("--noise-spike-factor", run_opts.noise_spike_factor, "Spike multiplier");
  run->add_option("--noise-seed", run_opts.noise_seed, "Noise seed");
  run->add_option("--rmax", run_opts.r_max, "Heatmap saturation ratio")->capture_default_str();
  run->add_flag("--svg", run_opts.svg, "Also write SVG diagrams");

  ExplainOptions explain_opts;
  auto* explain = app.add_subcommand("explain", "Race one query and print every candidate");
  explain_opts.common.add_to(*explain);
  explain->add_option("--lowA", explain_opts.low_a)->required();
  explain->add_option("--highA", explain_opts.high_a)->required();
  explain->add_option("--lowB", explain_opts.low_b)->required();
  explain->add_option("--highB", explain_opts.high_b)->required();
  explain->add_option("--hint", explain_opts.hint, "Force one plan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageExit;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_n, gen_dist, gen_seed, gen_out);
    if (run->parsed()) return cmd_run(run_opts);
    if (explain->parsed()) return cmd_explain(explain_opts);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailureExit;
  }
  return kFailureExit;
}
