#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fptp/document_store.hpp"
#include "fptp/plan_id.hpp"

namespace fptp {

// VANILLA: stock candidate gating. WITH_COLLSCAN: COLLSCAN always races.
// MOD: WITH_COLLSCAN candidates plus halved productivity for fetching plans.
enum class OptimizerVariant { kVanilla, kWithCollScan, kMod };

std::string_view to_string(OptimizerVariant v);
// Accepts "vanilla", "with-collscan", "mod". Throws Error.
OptimizerVariant parse_variant(std::string_view text);

enum class StageKind { kCollScan, kIndexScan, kFetch, kFilter, kProjectCovered };

std::string_view to_string(StageKind k);

struct Stage {
  StageKind kind = StageKind::kCollScan;
  // kIndexScan: index and leading-field bounds.
  std::string index_name;
  RangePredicate bounds;
  // kFilter: residual conjuncts; evaluated on the index key when
  // on_index_key is set, otherwise on the fetched document.
  std::vector<RangePredicate> predicates;
  bool on_index_key = false;

  bool operator==(const Stage&) const = default;
};

// Stages are listed leaf first: the access stage, then each stage consuming
// its output (e.g. IXSCAN -> FETCH -> FILTER).
struct CandidatePlan {
  PlanId id;
  std::vector<Stage> stages;

  bool has_stage(StageKind kind) const;
  bool has_fetch() const { return has_stage(StageKind::kFetch); }
  // "IXSCAN(A_1 [10,20)) -> FETCH -> FILTER(B in [0,5))"
  std::string describe() const;
};

// Candidate plans for `query`: one IXSCAN per single-field index on a query
// field, one covered IXSCAN per compound index whose leading field is
// constrained and whose keys cover the projection, and COLLSCAN when the
// gating check admits it. Index plans follow catalog order; COLLSCAN is last.
// With a hint the result is exactly the hinted plan, or UnknownPlanError.
std::vector<CandidatePlan> enumerate_candidates(const Query& query,
                                                const IndexCatalog& catalog,
                                                OptimizerVariant variant,
                                                bool collscan_allowed = true);

// Every plan that can be forced via a hint for this query (COLLSCAN first,
// then index plans in PlanId order).
std::vector<PlanId> executable_plans(const Query& query, const IndexCatalog& catalog);

}  // namespace fptp
