#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "fptp/document_store.hpp"
#include "fptp/executor.hpp"
#include "fptp/plans.hpp"

namespace fptp {

// Early-termination limits of the race.
struct RaceKnobs {
  std::uint64_t evaluation_works = 10000;
  double coll_fraction = 0.3;
  std::uint64_t max_results = 101;

  // max(evaluation_works, coll_fraction * n), the fractional part truncated.
  std::uint64_t max_works(std::size_t n_records) const;
  void validate() const;
  bool operator==(const RaceKnobs&) const = default;
};

struct TrialStats {
  PlanId plan;
  std::uint64_t works = 0;
  std::uint64_t results = 0;
  bool reached_eof = false;
  bool has_fetch = false;
  bool has_blocking_sort = false;
  bool has_ixisect = false;
};

struct RaceOutcome {
  std::vector<TrialStats> stats;  // candidate order
  std::uint64_t rounds = 0;
  std::uint64_t max_works = 0;
};

// Round-robin trial execution. Each round works every candidate once, in
// order; a plan reaching max_results or EOF stops the race once the round
// completes, and no more than max_works rounds run. Executions keep their
// cursor state. Throws Error for an empty candidate list.
RaceOutcome race(std::span<PlanExecution> candidates, std::size_t n_records,
                 const RaceKnobs& knobs);

TrialStats trial_stats(const PlanExecution& execution);

struct Score {
  double base = 1.0;
  double productivity = 0.0;
  double tie_break_unit = 0.0;
  double no_fetch_bonus = 0.0;
  double no_sort_bonus = 0.0;
  double no_ixisect_bonus = 0.0;
  double eof_bonus = 0.0;
  double total = 0.0;

  double tie_breakers() const { return no_fetch_bonus + no_sort_bonus + no_ixisect_bonus; }
};

// base + productivity + tie breakers + eof bonus, where productivity is
// results/works (halved under MOD for plans that fetch) and each tie breaker
// is min(1 / (10 * works), 1e-4) when its flag is clear.
// Throws UndefinedProductivityError when works == 0.
Score score_plan(const TrialStats& stats, OptimizerVariant variant);

// Index of the highest total; earliest candidate wins exact ties.
std::size_t best_index(std::span<const Score> scores);
PlanId pick_best(std::span<const Score> scores, std::span<const PlanId> candidates);

enum class CacheMode { kOff, kOn, kOnNoReplan };

std::string_view to_string(CacheMode m);
CacheMode parse_cache_mode(std::string_view text);

struct PlanCacheEntry {
  QueryShape shape;
  PlanId plan_id;
  std::uint64_t trial_works = 0;
  double replan_factor = 10.0;
};

enum class ReplanDecision { kKeep, kEvict };

// Evict iff observed_works > replan_factor * trial_works; never under
// kOnNoReplan.
ReplanDecision maybe_replan(const PlanCacheEntry& entry, std::uint64_t observed_works,
                            CacheMode mode = CacheMode::kOn);

// One entry per query shape. Not synchronized: callers sharing a cache across
// threads must serialize access.
class PlanCache {
 public:
  const PlanCacheEntry* find(const QueryShape& shape) const;
  void insert(PlanCacheEntry entry);
  void erase(const QueryShape& shape);
  void prime(const QueryShape& shape, PlanId plan_id, std::uint64_t trial_works);
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<QueryShape, PlanCacheEntry> entries_;
};

struct OptimizeResult {
  PlanId chosen;
  std::vector<PlanId> candidates;
  std::vector<TrialStats> stats;
  std::vector<Score> scores;
  std::uint64_t rounds = 0;
  bool from_cache = false;
  bool replanned = false;
  // The chosen plan, positioned where its race (or cache trial) left off.
  std::optional<PlanExecution> winner;
};

// Enumerate, race, score and pick; or serve from `cache` on a shape hit.
// Under kOn a hit is trial-run for up to replan_factor * trial_works units and
// replanned if it does not finish; kOnNoReplan always trusts the entry.
OptimizeResult optimize(const Query& query, const Collection& collection,
                        const IndexCatalog& catalog, OptimizerVariant variant,
                        const RaceKnobs& knobs, const CostModel& cost = {},
                        PlanCache* cache = nullptr, CacheMode cache_mode = CacheMode::kOff);

}  // namespace fptp
