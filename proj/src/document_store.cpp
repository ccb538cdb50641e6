#include "fptp/document_store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "fptp/errors.hpp"
#include "fptp/random.hpp"

namespace fptp {

Collection::Collection(std::string name, std::vector<std::string> field_list,
                       std::vector<Document> documents)
    : name_(std::move(name)),
      fields_(std::move(field_list)),
      documents_(std::move(documents)) {
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    for (std::size_t k = i + 1; k < fields_.size(); ++k) {
      if (fields_[i] == fields_[k]) throw Error("duplicate field '" + fields_[i] + "'");
    }
  }
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    if (documents_[i].record_id != i) {
      throw Error("record ids must be dense and ordered; document " +
                  std::to_string(i) + " has id " +
                  std::to_string(documents_[i].record_id));
    }
    if (documents_[i].values.size() != fields_.size()) {
      throw Error("document " + std::to_string(i) + " does not have " +
                  std::to_string(fields_.size()) + " fields");
    }
  }
  rows_.reserve(documents_.size() * fields_.size());
  for (const auto& doc : documents_) rows_.insert(rows_.end(), doc.values.begin(), doc.values.end());
}

std::size_t Collection::field_position(std::string_view field) const {
  auto it = std::find(fields_.begin(), fields_.end(), field);
  if (it == fields_.end()) throw UnknownFieldError(std::string(field));
  return static_cast<std::size_t>(it - fields_.begin());
}

bool Collection::has_field(std::string_view field) const {
  return std::find(fields_.begin(), fields_.end(), field) != fields_.end();
}

Index::Index(std::string name, std::vector<std::string> key_fields,
             std::vector<std::size_t> key_positions, std::vector<Value> keys,
             std::vector<RecordId> record_ids)
    : name_(std::move(name)),
      key_fields_(std::move(key_fields)),
      key_positions_(std::move(key_positions)),
      keys_(std::move(keys)),
      record_ids_(std::move(record_ids)) {}

std::optional<std::size_t> Index::key_position_of(std::string_view field) const {
  for (std::size_t k = 0; k < key_fields_.size(); ++k) {
    if (key_fields_[k] == field) return k;
  }
  return std::nullopt;
}

std::size_t Index::seek_leading(Value v) const {
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (leading_key(mid) < v) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;
}

void IndexCatalog::add(Index index) {
  if (find(index.name()) != nullptr) {
    throw Error("index '" + index.name() + "' already exists");
  }
  indexes_.push_back(std::move(index));
}

const Index* IndexCatalog::find(std::string_view name) const {
  for (const auto& index : indexes_) {
    if (index.name() == name) return &index;
  }
  return nullptr;
}

const Index* IndexCatalog::find_single_field(std::string_view field) const {
  for (const auto& index : indexes_) {
    if (!index.compound() && index.key_fields().front() == field) return &index;
  }
  return nullptr;
}

std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::kUniformDistinct: return "uniform-distinct";
    case Distribution::kUniformWithRepeats: return "uniform-with-repeats";
    case Distribution::kZipfian: return "zipfian";
  }
  return "?";
}

Distribution parse_distribution(std::string_view text) {
  for (auto d : {Distribution::kUniformDistinct, Distribution::kUniformWithRepeats,
                 Distribution::kZipfian}) {
    if (to_string(d) == text) return d;
  }
  throw Error("unknown distribution '" + std::string(text) +
              "' (expected uniform-distinct, uniform-with-repeats or zipfian)");
}

namespace {

const std::vector<std::string> kFields = {"A", "B"};

// Fisher-Yates over {0, ..., n-1}.
std::vector<Value> random_permutation(std::size_t n, Rng& rng) {
  std::vector<Value> values(n);
  std::iota(values.begin(), values.end(), Value{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(values[i - 1], values[j]);
  }
  return values;
}

std::vector<Value> uniform_with_repeats(std::size_t n, Rng& rng) {
  std::vector<Value> values(n);
  for (auto& v : values) v = static_cast<Value>(uniform_below(rng, n));
  return values;
}

// Zipf(s = 1) over ranks 1..n, rank r stored as value r-1.
std::vector<Value> zipfian(std::size_t n, Rng& rng) {
  std::vector<double> cdf(n);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    total += 1.0 / static_cast<double>(r + 1);
    cdf[r] = total;
  }
  std::vector<Value> values(n);
  for (auto& v : values) {
    const double u = uniform_unit(rng) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    v = static_cast<Value>(it - cdf.begin());
  }
  return values;
}

}  // namespace

Collection generate_dataset(std::size_t n, Distribution distribution,
                            std::uint64_t seed) {
  if (n == 0) throw EmptyCollectionError("dataset size must be at least 1");
  Rng rng(seed);
  std::vector<std::vector<Value>> columns;
  for (std::size_t f = 0; f < kFields.size(); ++f) {
    switch (distribution) {
      case Distribution::kUniformDistinct:
        columns.push_back(random_permutation(n, rng));
        break;
      case Distribution::kUniformWithRepeats:
        columns.push_back(uniform_with_repeats(n, rng));
        break;
      case Distribution::kZipfian:
        columns.push_back(zipfian(n, rng));
        break;
    }
  }
  std::vector<Document> docs(n);
  for (std::size_t i = 0; i < n; ++i) {
    docs[i].record_id = i;
    docs[i].values.reserve(columns.size());
    for (const auto& column : columns) docs[i].values.push_back(column[i]);
  }
  return Collection("data", kFields, std::move(docs));
}

Index build_index(const Collection& collection,
                  const std::vector<std::string>& key_fields) {
  if (key_fields.empty()) throw Error("an index needs at least one key field");
  std::vector<std::size_t> positions;
  std::string name;
  for (const auto& field : key_fields) {
    positions.push_back(collection.field_position(field));
    if (!name.empty()) name += '_';
    name += field + "_1";
  }

  const auto& docs = collection.documents();
  std::vector<RecordId> order(docs.size());
  std::iota(order.begin(), order.end(), RecordId{0});
  std::sort(order.begin(), order.end(), [&](RecordId a, RecordId b) {
    for (auto pos : positions) {
      const Value va = docs[a].values[pos];
      const Value vb = docs[b].values[pos];
      if (va != vb) return va < vb;
    }
    return a < b;
  });

  std::vector<Value> keys;
  keys.reserve(order.size() * positions.size());
  for (RecordId rid : order) {
    for (auto pos : positions) keys.push_back(docs[rid].values[pos]);
  }
  return Index(std::move(name), key_fields, std::move(positions), std::move(keys),
               std::move(order));
}

std::size_t count_matching(const Collection& collection,
                           const RangePredicate& predicate,
                           const IndexCatalog* catalog) {
  const std::size_t pos = collection.field_position(predicate.field);
  if (predicate.high <= predicate.low) return 0;
  if (catalog != nullptr) {
    if (const Index* index = catalog->find_single_field(predicate.field)) {
      return index->seek_leading(predicate.high) - index->seek_leading(predicate.low);
    }
  }
  std::size_t count = 0;
  for (const auto& doc : collection.documents()) {
    if (predicate.matches(doc.values[pos])) ++count;
  }
  return count;
}

double selectivity(const Collection& collection, const RangePredicate& predicate,
                   const IndexCatalog* catalog) {
  if (collection.empty()) return 0.0;
  return static_cast<double>(count_matching(collection, predicate, catalog)) /
         static_cast<double>(collection.size());
}

std::string encode_dataset(const Collection& collection) {
  std::string out = "record_id";
  for (const auto& f : collection.fields()) out += "," + f;
  out += '\n';
  char buf[32];
  for (const auto& doc : collection.documents()) {
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, doc.record_id);
    out.append(buf, p);
    for (Value v : doc.values) {
      out += ',';
      auto [q, ec2] = std::to_chars(buf, buf + sizeof buf, v);
      out.append(buf, q);
    }
    out += '\n';
  }
  return out;
}

void save_dataset(const Collection& collection, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  const std::string text = encode_dataset(collection);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <typename T>
T parse_integer(std::string_view text, std::size_t line_no, std::string_view column) {
  T value{};
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || p != text.data() + text.size()) {
    throw ParseError(line_no, "column '" + std::string(column) +
                                  "': not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Collection decode_dataset(std::string_view text, std::string name) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::vector<std::string> fields;
  std::vector<Document> docs;
  bool header_seen = false;

  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (!header_seen) {
      auto cols = split_commas(line);
      if (cols.empty() || cols.front() != "record_id") {
        throw ParseError(line_no, "header must start with 'record_id'");
      }
      for (std::size_t c = 1; c < cols.size(); ++c) {
        if (cols[c].empty()) throw ParseError(line_no, "empty field name in header");
        fields.emplace_back(cols[c]);
      }
      header_seen = true;
      continue;
    }
    if (line.empty() && pos >= text.size()) break;

    auto cols = split_commas(line);
    if (cols.size() != fields.size() + 1) {
      throw ParseError(line_no, "expected " + std::to_string(fields.size() + 1) +
                                    " columns, found " + std::to_string(cols.size()));
    }
    Document doc;
    doc.record_id = parse_integer<RecordId>(cols[0], line_no, "record_id");
    if (doc.record_id != docs.size()) {
      throw ParseError(line_no, "record_id " + std::to_string(doc.record_id) +
                                    " out of order (expected " +
                                    std::to_string(docs.size()) + ")");
    }
    doc.values.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      doc.values.push_back(parse_integer<Value>(cols[c + 1], line_no, fields[c]));
    }
    docs.push_back(std::move(doc));
  }
  if (!header_seen) throw ParseError(1, "missing header");
  return Collection(std::move(name), std::move(fields), std::move(docs));
}

Collection load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return decode_dataset(buffer.str(), path.stem().string());
}

std::uint64_t dataset_fingerprint(const Collection& collection) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  feed(collection.size());
  for (const auto& doc : collection.documents()) {
    for (Value v : doc.values) feed(static_cast<std::uint64_t>(v));
  }
  return h;
}

const RangePredicate* Query::predicate_on(std::string_view field) const {
  for (const auto& p : predicates) {
    if (p.field == field) return &p;
  }
  return nullptr;
}

void validate_query(const Query& query, const Collection& collection) {
  if (query.predicates.size() != 2) {
    throw InvalidQueryError("a query needs exactly two range predicates");
  }
  if (query.predicates[0].field == query.predicates[1].field) {
    throw InvalidQueryError("predicate fields must be distinct");
  }
  for (const auto& p : query.predicates) {
    collection.field_position(p.field);
    if (p.low > p.high) {
      throw InvalidQueryError("predicate on '" + p.field + "' has low > high");
    }
  }
  if (query.projection) {
    for (const auto& f : query.projection->fields) collection.field_position(f);
  }
}

std::vector<RecordId> matching_record_ids(const Collection& collection,
                                          const Query& query) {
  std::vector<std::pair<std::size_t, const RangePredicate*>> resolved;
  for (const auto& p : query.predicates) {
    resolved.emplace_back(collection.field_position(p.field), &p);
  }
  std::vector<RecordId> out;
  for (const auto& doc : collection.documents()) {
    bool ok = true;
    for (const auto& [pos, pred] : resolved) {
      if (!pred->matches(doc.values[pos])) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(doc.record_id);
  }
  return out;
}

QueryShape shape_of(const Query& query) {
  std::vector<std::string> filter;
  for (const auto& p : query.predicates) filter.push_back(p.field + ":{$gte,$lt}");
  std::sort(filter.begin(), filter.end());

  std::string s = "filter:{";
  for (std::size_t i = 0; i < filter.size(); ++i) {
    if (i) s += ',';
    s += filter[i];
  }
  s += "} projection:{";
  if (query.projection) {
    std::vector<std::string> fields = query.projection->fields;
    std::sort(fields.begin(), fields.end());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) s += ',';
      s += fields[i] + ":1";
    }
    if (query.projection->suppress_record_id) {
      s += fields.empty() ? "_id:0" : ",_id:0";
    }
  }
  s += "} sort:{}";
  return QueryShape{std::move(s)};
}

}  // namespace fptp
