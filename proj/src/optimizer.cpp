#include "fptp/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "fptp/errors.hpp"

namespace fptp {

std::uint64_t RaceKnobs::max_works(std::size_t n_records) const {
  const auto fraction_works =
      static_cast<std::uint64_t>(coll_fraction * static_cast<double>(n_records));
  return std::max(evaluation_works, fraction_works);
}

void RaceKnobs::validate() const {
  if (evaluation_works == 0 || max_results == 0 || !(coll_fraction > 0.0) ||
      !std::isfinite(coll_fraction)) {
    throw Error("race knobs must be positive");
  }
}

TrialStats trial_stats(const PlanExecution& execution) {
  TrialStats s;
  s.plan = execution.plan().id;
  s.works = execution.works();
  s.results = execution.results();
  s.reached_eof = execution.eof();
  s.has_fetch = execution.plan().has_fetch();
  return s;
}

RaceOutcome race(std::span<PlanExecution> candidates, std::size_t n_records,
                 const RaceKnobs& knobs) {
  if (candidates.empty()) throw Error("race needs at least one candidate plan");
  knobs.validate();

  RaceOutcome outcome;
  outcome.max_works = knobs.max_works(n_records);
  bool working = true;
  std::uint64_t round = 0;
  while (working && round < outcome.max_works) {
    // Every candidate gets its unit this round even after working flips.
    for (auto& plan : candidates) {
      const WorkState state = plan.work();
      if (state == WorkState::kAdvanced) {
        if (plan.results() >= knobs.max_results) working = false;
      } else if (state == WorkState::kEof) {
        working = false;
      }
    }
    ++round;
  }
  outcome.rounds = round;
  outcome.stats.reserve(candidates.size());
  for (const auto& plan : candidates) outcome.stats.push_back(trial_stats(plan));
  return outcome;
}

Score score_plan(const TrialStats& stats, OptimizerVariant variant) {
  if (stats.works == 0) {
    throw UndefinedProductivityError("plan " + stats.plan.to_string() +
                                     " performed no work; productivity is undefined");
  }
  const double works = static_cast<double>(stats.works);
  Score s;
  s.base = 1.0;
  s.productivity = static_cast<double>(stats.results) / works;
  if (variant == OptimizerVariant::kMod && stats.has_fetch) s.productivity /= 2.0;
  s.tie_break_unit = std::min(1.0 / (10.0 * works), 1e-4);
  s.no_fetch_bonus = stats.has_fetch ? 0.0 : s.tie_break_unit;
  s.no_sort_bonus = stats.has_blocking_sort ? 0.0 : s.tie_break_unit;
  s.no_ixisect_bonus = stats.has_ixisect ? 0.0 : s.tie_break_unit;
  s.eof_bonus = stats.reached_eof ? 1.0 : 0.0;
  s.total = s.base + s.productivity + s.tie_breakers() + s.eof_bonus;
  return s;
}

std::size_t best_index(std::span<const Score> scores) {
  if (scores.empty()) throw Error("no scores to pick from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i].total > scores[best].total) best = i;
  }
  return best;
}

PlanId pick_best(std::span<const Score> scores, std::span<const PlanId> candidates) {
  if (scores.size() != candidates.size()) {
    throw Error("score and candidate lists differ in length");
  }
  return candidates[best_index(scores)];
}

std::string_view to_string(CacheMode m) {
  switch (m) {
    case CacheMode::kOff: return "off";
    case CacheMode::kOn: return "on";
    case CacheMode::kOnNoReplan: return "on-no-replan";
  }
  return "?";
}

CacheMode parse_cache_mode(std::string_view text) {
  for (auto m : {CacheMode::kOff, CacheMode::kOn, CacheMode::kOnNoReplan}) {
    if (to_string(m) == text) return m;
  }
  throw Error("unknown cache mode '" + std::string(text) +
              "' (expected off, on or on-no-replan)");
}

ReplanDecision maybe_replan(const PlanCacheEntry& entry, std::uint64_t observed_works,
                            CacheMode mode) {
  if (mode == CacheMode::kOnNoReplan) return ReplanDecision::kKeep;
  const double limit = entry.replan_factor * static_cast<double>(entry.trial_works);
  return static_cast<double>(observed_works) > limit ? ReplanDecision::kEvict
                                                     : ReplanDecision::kKeep;
}

const PlanCacheEntry* PlanCache::find(const QueryShape& shape) const {
  auto it = entries_.find(shape);
  return it == entries_.end() ? nullptr : &it->second;
}

void PlanCache::insert(PlanCacheEntry entry) {
  auto shape = entry.shape;
  entries_.insert_or_assign(std::move(shape), std::move(entry));
}

void PlanCache::erase(const QueryShape& shape) { entries_.erase(shape); }

void PlanCache::prime(const QueryShape& shape, PlanId plan_id, std::uint64_t trial_works) {
  insert(PlanCacheEntry{shape, std::move(plan_id), trial_works, 10.0});
}

namespace {

std::optional<OptimizeResult> try_cached(const Query& query, const Collection& collection,
                                         const IndexCatalog& catalog,
                                         OptimizerVariant variant, const RaceKnobs& knobs,
                                         const CostModel& cost, PlanCache& cache,
                                         CacheMode mode, const QueryShape& shape) {
  const PlanCacheEntry* entry = cache.find(shape);
  if (entry == nullptr) return std::nullopt;

  Query hinted = query;
  hinted.hint = entry->plan_id;
  std::vector<CandidatePlan> plans;
  try {
    plans = enumerate_candidates(hinted, catalog, variant);
  } catch (const UnknownPlanError&) {
    cache.erase(shape);
    return std::nullopt;
  }

  OptimizeResult result;
  result.chosen = entry->plan_id;
  result.candidates = {entry->plan_id};
  result.from_cache = true;
  result.winner.emplace(std::move(plans.front()), collection, catalog, cost);

  if (mode == CacheMode::kOn) {
    // Trial the cached plan under its work budget; evict if it overruns.
    const auto budget = static_cast<std::uint64_t>(
        entry->replan_factor * static_cast<double>(entry->trial_works));
    PlanExecution& exec = *result.winner;
    while (!exec.eof() && exec.results() < knobs.max_results && exec.works() <= budget) {
      exec.work();
    }
    if (maybe_replan(*entry, exec.works(), mode) == ReplanDecision::kEvict) {
      cache.erase(shape);
      return std::nullopt;
    }
    result.stats = {trial_stats(exec)};
    result.scores = {score_plan(result.stats.front(), variant)};
  }
  return result;
}

}  // namespace

OptimizeResult optimize(const Query& query, const Collection& collection,
                        const IndexCatalog& catalog, OptimizerVariant variant,
                        const RaceKnobs& knobs, const CostModel& cost, PlanCache* cache,
                        CacheMode cache_mode) {
  validate_query(query, collection);
  const bool use_cache = cache != nullptr && cache_mode != CacheMode::kOff;
  const QueryShape shape = shape_of(query);

  bool replanned = false;
  if (use_cache) {
    const bool had_entry = cache->find(shape) != nullptr;
    if (auto hit = try_cached(query, collection, catalog, variant, knobs, cost, *cache,
                              cache_mode, shape)) {
      return std::move(*hit);
    }
    replanned = had_entry;
  }

  auto plans = enumerate_candidates(query, catalog, variant);
  std::vector<PlanExecution> executions;
  executions.reserve(plans.size());
  for (auto& plan : plans) executions.emplace_back(std::move(plan), collection, catalog, cost);

  OptimizeResult result;
  RaceOutcome outcome = race(executions, collection.size(), knobs);
  result.rounds = outcome.rounds;
  result.stats = std::move(outcome.stats);
  for (const auto& s : result.stats) {
    result.candidates.push_back(s.plan);
    result.scores.push_back(score_plan(s, variant));
  }
  const std::size_t best = best_index(result.scores);
  result.chosen = result.candidates[best];
  result.replanned = replanned;
  result.winner.emplace(std::move(executions[best]));

  if (use_cache) {
    cache->insert(PlanCacheEntry{shape, result.chosen, result.stats[best].works, 10.0});
  }
  return result;
}

}  // namespace fptp
