#include "fptp/plans.hpp"

#include <algorithm>
#include <array>

#include "fptp/errors.hpp"

namespace fptp {

std::string PlanId::to_string() const {
  if (kind_ == Kind::kCollScan) return "COLLSCAN";
  // Index names alternate field and direction: "A_1_B_1".
  std::string fields;
  std::size_t start = 0;
  bool is_field = true;
  while (start <= index_name_.size()) {
    std::size_t end = index_name_.find('_', start);
    if (end == std::string::npos) end = index_name_.size();
    if (is_field) fields += index_name_.substr(start, end - start);
    is_field = !is_field;
    start = end + 1;
  }
  return "IXSCAN_" + fields;
}

namespace {

const std::array<std::pair<std::string_view, PlanId (*)()>, 4> kHintForms = {{
    {"COLLSCAN", [] { return PlanId::collscan(); }},
    {"IXSCAN_A", [] { return PlanId::index_scan("A_1"); }},
    {"IXSCAN_B", [] { return PlanId::index_scan("B_1"); }},
    {"IXSCAN_AB", [] { return PlanId::covered_scan("A_1_B_1"); }},
}};

}  // namespace

PlanId parse_plan_hint(std::string_view text) {
  for (const auto& [form, make] : kHintForms) {
    if (form == text) return make();
  }
  std::string valid;
  for (const auto& [form, make] : kHintForms) {
    if (!valid.empty()) valid += ", ";
    valid += form;
  }
  throw UnknownPlanError("unknown plan '" + std::string(text) +
                         "' (valid plans: " + valid + ")");
}

std::string_view to_string(OptimizerVariant v) {
  switch (v) {
    case OptimizerVariant::kVanilla: return "vanilla";
    case OptimizerVariant::kWithCollScan: return "with-collscan";
    case OptimizerVariant::kMod: return "mod";
  }
  return "?";
}

OptimizerVariant parse_variant(std::string_view text) {
  for (auto v : {OptimizerVariant::kVanilla, OptimizerVariant::kWithCollScan,
                 OptimizerVariant::kMod}) {
    if (to_string(v) == text) return v;
  }
  throw Error("unknown variant '" + std::string(text) +
              "' (expected vanilla, with-collscan or mod)");
}

std::string_view to_string(StageKind k) {
  switch (k) {
    case StageKind::kCollScan: return "COLLSCAN";
    case StageKind::kIndexScan: return "IXSCAN";
    case StageKind::kFetch: return "FETCH";
    case StageKind::kFilter: return "FILTER";
    case StageKind::kProjectCovered: return "PROJECTION_COVERED";
  }
  return "?";
}

bool CandidatePlan::has_stage(StageKind kind) const {
  return std::any_of(stages.begin(), stages.end(),
                     [kind](const Stage& s) { return s.kind == kind; });
}

namespace {

std::string describe_range(const RangePredicate& p) {
  return p.field + " in [" + std::to_string(p.low) + "," + std::to_string(p.high) + ")";
}

std::string describe_stage(const Stage& s) {
  std::string out(to_string(s.kind));
  switch (s.kind) {
    case StageKind::kIndexScan:
      out += "(" + s.index_name + " " + describe_range(s.bounds) + ")";
      break;
    case StageKind::kFilter: {
      out += "(";
      for (std::size_t i = 0; i < s.predicates.size(); ++i) {
        if (i) out += " && ";
        out += describe_range(s.predicates[i]);
      }
      if (s.on_index_key) out += " on key";
      out += ")";
      break;
    }
    default:
      break;
  }
  return out;
}

CandidatePlan make_collscan(const Query& query) {
  CandidatePlan plan{PlanId::collscan(), {}};
  plan.stages.push_back(Stage{StageKind::kCollScan, {}, {}, {}, false});
  plan.stages.push_back(Stage{StageKind::kFilter, {}, {}, query.predicates, false});
  return plan;
}

std::vector<RangePredicate> residual(const Query& query, std::string_view indexed) {
  std::vector<RangePredicate> rest;
  for (const auto& p : query.predicates) {
    if (p.field != indexed) rest.push_back(p);
  }
  return rest;
}

// Index-based plans in catalog creation order.
std::vector<CandidatePlan> index_plans(const Query& query, const IndexCatalog& catalog) {
  std::vector<CandidatePlan> plans;
  for (const Index& index : catalog.indexes()) {
    const std::string& leading = index.key_fields().front();
    const RangePredicate* bound = query.predicate_on(leading);
    if (bound == nullptr) continue;

    if (!index.compound()) {
      CandidatePlan plan{PlanId::index_scan(index.name()), {}};
      plan.stages.push_back(Stage{StageKind::kIndexScan, index.name(), *bound, {}, false});
      plan.stages.push_back(Stage{StageKind::kFetch, {}, {}, {}, false});
      auto rest = residual(query, leading);
      if (!rest.empty()) {
        plan.stages.push_back(Stage{StageKind::kFilter, {}, {}, std::move(rest), false});
      }
      plans.push_back(std::move(plan));
      continue;
    }

    // Covered plans need the projection and every filtered field in the key.
    if (!query.projection) continue;
    auto in_key = [&index](const std::string& f) {
      return index.key_position_of(f).has_value();
    };
    const auto& proj = query.projection->fields;
    if (!std::all_of(proj.begin(), proj.end(), in_key)) continue;
    if (!query.projection->suppress_record_id) continue;
    bool filters_covered = true;
    for (const auto& p : query.predicates) filters_covered = filters_covered && in_key(p.field);
    if (!filters_covered) continue;

    CandidatePlan plan{PlanId::covered_scan(index.name()), {}};
    plan.stages.push_back(Stage{StageKind::kIndexScan, index.name(), *bound, {}, false});
    auto rest = residual(query, leading);
    if (!rest.empty()) {
      plan.stages.push_back(Stage{StageKind::kFilter, {}, {}, std::move(rest), true});
    }
    plan.stages.push_back(Stage{StageKind::kProjectCovered, {}, {}, {}, false});
    plans.push_back(std::move(plan));
  }
  return plans;
}

}  // namespace

std::string CandidatePlan::describe() const {
  std::string out;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (i) out += " -> ";
    out += describe_stage(stages[i]);
  }
  return out;
}

std::vector<CandidatePlan> enumerate_candidates(const Query& query,
                                                const IndexCatalog& catalog,
                                                OptimizerVariant variant,
                                                bool collscan_allowed) {
  auto plans = index_plans(query, catalog);

  if (query.hint) {
    const PlanId& hint = *query.hint;
    if (hint.is_collscan()) {
      if (!collscan_allowed) {
        throw UnknownPlanError("COLLSCAN hinted but collection scans are disabled");
      }
      return {make_collscan(query)};
    }
    for (auto& plan : plans) {
      if (plan.id == hint) return {std::move(plan)};
    }
    throw UnknownPlanError("hinted plan " + hint.to_string() +
                           " cannot be produced for this query and catalog");
  }

  // possibleToCollscan && (collscanRequested || collScanRequired), widened by
  // the variants that always race COLLSCAN.
  const bool collscan_required = plans.empty();
  const bool forced_by_variant = variant != OptimizerVariant::kVanilla;
  if (collscan_allowed && (forced_by_variant || collscan_required)) {
    plans.push_back(make_collscan(query));
  }
  return plans;
}

std::vector<PlanId> executable_plans(const Query& query, const IndexCatalog& catalog) {
  std::vector<PlanId> ids{PlanId::collscan()};
  for (const auto& plan : index_plans(query, catalog)) ids.push_back(plan.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace fptp
