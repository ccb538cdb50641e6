#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fptp/plan_id.hpp"

namespace fptp {

using RecordId = std::uint64_t;
using Value = std::int64_t;

// A stored record. values[k] belongs to the collection's k-th declared field.
struct Document {
  RecordId record_id = 0;
  std::vector<Value> values;

  bool operator==(const Document&) const = default;
};

// Documents in record_id order; iteration order models on-disk scan order.
class Collection {
 public:
  Collection(std::string name, std::vector<std::string> field_list,
             std::vector<Document> documents);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& fields() const { return fields_; }
  const std::vector<Document>& documents() const { return documents_; }
  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }

  // Throws UnknownFieldError.
  std::size_t field_position(std::string_view field) const;
  bool has_field(std::string_view field) const;

  Value value(RecordId rid, std::size_t field_pos) const {
    return rows_[rid * fields_.size() + field_pos];
  }
  // All field values of one document, contiguous.
  std::span<const Value> row(RecordId rid) const {
    return {rows_.data() + rid * fields_.size(), fields_.size()};
  }

  bool operator==(const Collection& other) const {
    return name_ == other.name_ && fields_ == other.fields_ && documents_ == other.documents_;
  }

 private:
  std::string name_;
  std::vector<std::string> fields_;
  std::vector<Document> documents_;
  std::vector<Value> rows_;  // row-major copy of documents_ for scans and fetches
};

// lowA <= A < highA
struct RangePredicate {
  std::string field;
  Value low = 0;
  Value high = 0;

  bool matches(Value v) const { return low <= v && v < high; }
  bool operator==(const RangePredicate&) const = default;
};

struct IndexEntryView {
  std::span<const Value> key;
  RecordId record_id;
};

// Sorted secondary index. Keys are stored flat, key_width values per entry,
// ordered lexicographically by key tuple and then record_id.
class Index {
 public:
  Index(std::string name, std::vector<std::string> key_fields,
        std::vector<std::size_t> key_positions, std::vector<Value> keys,
        std::vector<RecordId> record_ids);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& key_fields() const { return key_fields_; }
  // Positions of the key fields within the owning collection's field list.
  const std::vector<std::size_t>& key_positions() const { return key_positions_; }
  std::size_t key_width() const { return key_fields_.size(); }
  std::size_t size() const { return record_ids_.size(); }
  bool compound() const { return key_fields_.size() > 1; }

  std::span<const Value> key(std::size_t i) const {
    return {keys_.data() + i * key_width(), key_width()};
  }
  Value leading_key(std::size_t i) const { return keys_[i * key_width()]; }
  RecordId record_id(std::size_t i) const { return record_ids_[i]; }
  IndexEntryView entry(std::size_t i) const { return {key(i), record_id(i)}; }

  // Position of the key within this index, or nullopt.
  std::optional<std::size_t> key_position_of(std::string_view field) const;

  // First entry whose leading key is >= v.
  std::size_t seek_leading(Value v) const;

 private:
  std::string name_;
  std::vector<std::string> key_fields_;
  std::vector<std::size_t> key_positions_;
  std::vector<Value> keys_;
  std::vector<RecordId> record_ids_;
};

// Indexes in creation order.
class IndexCatalog {
 public:
  // Throws Error on duplicate names.
  void add(Index index);
  const std::vector<Index>& indexes() const { return indexes_; }
  const Index* find(std::string_view name) const;
  // Single-field index over `field`, if any.
  const Index* find_single_field(std::string_view field) const;
  bool empty() const { return indexes_.empty(); }

 private:
  std::vector<Index> indexes_;
};

enum class Distribution { kUniformDistinct, kUniformWithRepeats, kZipfian };

std::string_view to_string(Distribution d);
// Throws Error on unknown names.
Distribution parse_distribution(std::string_view text);

// Fields "A" and "B", each drawn independently. Throws EmptyCollectionError
// for n == 0.
Collection generate_dataset(std::size_t n, Distribution distribution,
                            std::uint64_t seed);

// Name is "<f1>_1[_<f2>_1...]". Throws UnknownFieldError.
Index build_index(const Collection& collection,
                  const std::vector<std::string>& key_fields);

// Exact count of documents matching the predicate; uses a single-field index
// from `catalog` when one exists, otherwise scans.
std::size_t count_matching(const Collection& collection,
                           const RangePredicate& predicate,
                           const IndexCatalog* catalog = nullptr);

double selectivity(const Collection& collection, const RangePredicate& predicate,
                   const IndexCatalog* catalog = nullptr);

// CSV: header "record_id,<fields...>", one row per document, LF endings.
void save_dataset(const Collection& collection, const std::filesystem::path& path);
std::string encode_dataset(const Collection& collection);
// Throws ParseError (with line number) or IoError.
Collection load_dataset(const std::filesystem::path& path);
Collection decode_dataset(std::string_view text, std::string name = "data");

// FNV-1a over the document values; identifies a dataset in provenance blocks.
std::uint64_t dataset_fingerprint(const Collection& collection);

struct Projection {
  std::vector<std::string> fields;
  bool suppress_record_id = true;

  bool operator==(const Projection&) const = default;
};

// Conjunction of exactly two range predicates on distinct fields.
struct Query {
  std::vector<RangePredicate> predicates;
  std::optional<Projection> projection;
  std::optional<PlanId> hint;

  const RangePredicate* predicate_on(std::string_view field) const;
  bool operator==(const Query&) const = default;
};

// Throws InvalidQueryError / UnknownFieldError.
void validate_query(const Query& query, const Collection& collection);

// Naive full-filter evaluation: record ids matching every predicate, ascending.
std::vector<RecordId> matching_record_ids(const Collection& collection,
                                          const Query& query);

// Structure of a query with constants elided; the plan-cache key.
struct QueryShape {
  std::string canonical;

  bool operator==(const QueryShape&) const = default;
  auto operator<=>(const QueryShape&) const = default;
};

QueryShape shape_of(const Query& query);

}  // namespace fptp
