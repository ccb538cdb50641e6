#include "fptp/executor.hpp"

#include <algorithm>
#include <cmath>

#include "fptp/errors.hpp"

namespace fptp {

std::string_view to_string(WorkState s) {
  switch (s) {
    case WorkState::kAdvanced: return "ADVANCED";
    case WorkState::kNeedTime: return "NEED_TIME";
    case WorkState::kEof: return "EOF";
  }
  return "?";
}

void CostModel::validate() const {
  for (double c : {seq_scan, index_entry, fetch}) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw Error("cost model constants must be strictly positive");
    }
  }
}

PlanExecution::PlanExecution(CandidatePlan plan, const Collection& collection,
                             const IndexCatalog& catalog, CostModel cost)
    : plan_(std::move(plan)), collection_(&collection), cost_(cost) {
  cost_.validate();
  if (plan_.stages.empty()) throw Error("plan has no stages");

  const Stage& access = plan_.stages.front();
  if (access.kind == StageKind::kIndexScan) {
    index_ = catalog.find(access.index_name);
    if (index_ == nullptr) {
      throw MissingIndexError("plan " + plan_.id.to_string() + " needs missing index '" +
                              access.index_name + "'");
    }
    cursor_ = index_->seek_leading(access.bounds.low);
    bound_high_ = access.bounds.high;
  } else if (access.kind != StageKind::kCollScan) {
    throw Error("plan must start with an access stage");
  }

  // Documents are in hand from the start for COLLSCAN, after FETCH otherwise.
  bool have_document = index_ == nullptr;
  for (std::size_t s = 1; s < plan_.stages.size(); ++s) {
    const Stage& stage = plan_.stages[s];
    switch (stage.kind) {
      case StageKind::kFetch:
        if (index_ == nullptr) throw Error("FETCH above COLLSCAN");
        fetches_ = true;
        have_document = true;
        break;
      case StageKind::kFilter:
        for (const auto& p : stage.predicates) {
          if (stage.on_index_key) {
            if (index_ == nullptr) throw Error("key filter without an index scan");
            auto pos = index_->key_position_of(p.field);
            if (!pos) throw Error("field '" + p.field + "' is not in index " + index_->name());
            key_filters_.push_back({*pos, p.low, p.high});
          } else {
            if (!have_document) throw Error("document filter before FETCH");
            doc_filters_.push_back({collection_->field_position(p.field), p.low, p.high});
          }
        }
        break;
      case StageKind::kProjectCovered:
        if (index_ == nullptr || fetches_) throw Error("covered projection needs a pure index scan");
        projects_covered_ = true;
        break;
      default:
        throw Error("access stage in non-leaf position");
    }
  }
}

bool PlanExecution::apply_filters(const std::vector<ResolvedFilter>& filters,
                                  std::span<const Value> values) const {
  for (const auto& f : filters) {
    const Value v = values[f.position];
    if (v < f.low || v >= f.high) return false;
  }
  return true;
}

WorkState PlanExecution::work() {
  if (eof_) return WorkState::kEof;
  ++works_;

  RecordId rid = 0;
  if (index_ == nullptr) {
    if (cursor_ >= collection_->size()) {
      eof_ = true;
      return WorkState::kEof;
    }
    rid = cursor_++;
    sim_time_ += cost_.seq_scan;
    if (!apply_filters(doc_filters_, collection_->row(rid))) {
      return WorkState::kNeedTime;
    }
  } else {
    if (cursor_ >= index_->size() || index_->leading_key(cursor_) >= bound_high_) {
      eof_ = true;
      return WorkState::kEof;
    }
    const std::size_t entry = cursor_++;
    rid = index_->record_id(entry);
    sim_time_ += cost_.index_entry;
    if (!apply_filters(key_filters_, index_->key(entry))) return WorkState::kNeedTime;
    if (fetches_) {
      sim_time_ += cost_.fetch;
      if (!apply_filters(doc_filters_, collection_->row(rid))) {
        return WorkState::kNeedTime;
      }
    }
    if (projects_covered_) {
      auto key = index_->key(entry);
      covered_rows_.insert(covered_rows_.end(), key.begin(), key.end());
    }
  }
  emitted_.push_back(rid);
  ++results_;
  return WorkState::kAdvanced;
}

PlanExecution open_execution(const CandidatePlan& plan, const Collection& collection,
                             const IndexCatalog& catalog, const CostModel& cost) {
  return PlanExecution(plan, collection, catalog, cost);
}

CompletedRun run_to_completion(PlanExecution& execution) {
  while (execution.work() != WorkState::kEof) {
  }
  CompletedRun run;
  run.record_ids.assign(execution.emitted().begin(), execution.emitted().end());
  std::sort(run.record_ids.begin(), run.record_ids.end());
  run.sim_time = execution.sim_time();
  run.works = execution.works();
  return run;
}

}  // namespace fptp
