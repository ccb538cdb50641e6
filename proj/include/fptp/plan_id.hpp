#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace fptp {

// Identifies an access path independently of any particular query's bounds.
// String forms ("COLLSCAN", "IXSCAN_A", "IXSCAN_B", "IXSCAN_AB") are stable:
// they appear in hints, CSV/JSON reports and diagram legends.
class PlanId {
 public:
  enum class Kind { kCollScan, kIndexScan, kCoveredIndexScan };

  PlanId() = default;

  static PlanId collscan() { return PlanId(Kind::kCollScan, {}); }
  static PlanId index_scan(std::string index_name) {
    return PlanId(Kind::kIndexScan, std::move(index_name));
  }
  static PlanId covered_scan(std::string index_name) {
    return PlanId(Kind::kCoveredIndexScan, std::move(index_name));
  }

  Kind kind() const { return kind_; }
  const std::string& index_name() const { return index_name_; }
  bool is_collscan() const { return kind_ == Kind::kCollScan; }

  // "A_1_B_1" -> "IXSCAN_AB".
  std::string to_string() const;

  // Ordering is kind first (COLLSCAN < IXSCAN < covered IXSCAN), then index
  // name. This is the report column order and the deterministic tie order.
  auto operator<=>(const PlanId&) const = default;
  bool operator==(const PlanId&) const = default;

 private:
  PlanId(Kind kind, std::string index_name)
      : kind_(kind), index_name_(std::move(index_name)) {}

  Kind kind_ = Kind::kCollScan;
  std::string index_name_;
};

// Maps a stable string form back to a PlanId. Throws UnknownPlanError listing
// the valid forms.
PlanId parse_plan_hint(std::string_view text);

}  // namespace fptp
