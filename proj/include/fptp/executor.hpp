#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fptp/document_store.hpp"
#include "fptp/plans.hpp"

namespace fptp {

enum class WorkState { kAdvanced, kNeedTime, kEof };

std::string_view to_string(WorkState s);

// Simulated time units charged per physical step.
struct CostModel {
  double seq_scan = 1.0;     // document examined by COLLSCAN
  double index_entry = 1.0;  // index entry examined
  double fetch = 4.0;        // document fetched by record id

  // Throws Error unless all three are strictly positive and finite.
  void validate() const;
  bool operator==(const CostModel&) const = default;
};

// Cursor over one candidate plan. Each work() is one logical unit of work as
// the optimizer counts it; sim_time is what that unit really cost. An index
// entry plus its fetch is a single unit.
//
// Cursor exhaustion is detected by a work() that returns EOF, counts as a
// unit and adds no time. After EOF every call returns EOF without changing
// state.
class PlanExecution {
 public:
  // Throws MissingIndexError if the plan references an index not in catalog.
  PlanExecution(CandidatePlan plan, const Collection& collection,
                const IndexCatalog& catalog, CostModel cost);

  WorkState work();

  const CandidatePlan& plan() const { return plan_; }
  std::uint64_t works() const { return works_; }
  std::uint64_t results() const { return results_; }
  double sim_time() const { return sim_time_; }
  bool eof() const { return eof_; }
  // Record ids of every ADVANCED unit, in emission order.
  std::span<const RecordId> emitted() const { return emitted_; }
  // Covered plans only: key tuples of emitted rows, flattened.
  std::span<const Value> covered_rows() const { return covered_rows_; }
  // Position of the access cursor (document ordinal or index entry ordinal).
  std::size_t cursor() const { return cursor_; }

 private:
  struct ResolvedFilter {
    std::size_t position;  // in the document, or in the index key
    Value low;
    Value high;
  };

  bool apply_filters(const std::vector<ResolvedFilter>& filters,
                     std::span<const Value> values) const;

  CandidatePlan plan_;
  const Collection* collection_;
  const Index* index_ = nullptr;
  CostModel cost_;

  bool fetches_ = false;
  bool projects_covered_ = false;
  std::vector<ResolvedFilter> doc_filters_;
  std::vector<ResolvedFilter> key_filters_;
  Value bound_high_ = 0;

  std::size_t cursor_ = 0;
  std::uint64_t works_ = 0;
  std::uint64_t results_ = 0;
  double sim_time_ = 0.0;
  bool eof_ = false;
  std::vector<RecordId> emitted_;
  std::vector<Value> covered_rows_;
};

PlanExecution open_execution(const CandidatePlan& plan, const Collection& collection,
                             const IndexCatalog& catalog, const CostModel& cost);

struct CompletedRun {
  std::vector<RecordId> record_ids;  // ascending
  double sim_time = 0.0;
  std::uint64_t works = 0;
};

// Works the execution until EOF.
CompletedRun run_to_completion(PlanExecution& execution);

}  // namespace fptp
