#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>

#include "fptp/document_store.hpp"
#include "fptp/errors.hpp"
#include "test_support.hpp"

namespace fptp {
namespace {

using testing::collection_of;

std::vector<Value> column(const Collection& c, std::size_t pos) {
  std::vector<Value> out;
  for (const auto& d : c.documents()) out.push_back(d.values[pos]);
  return out;
}

std::vector<Value> iota_values(std::size_t n) {
  std::vector<Value> v(n);
  std::iota(v.begin(), v.end(), Value{0});
  return v;
}

TEST(GenerateDataset, SingleDocumentIsZeroZero) {
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    auto c = generate_dataset(1, Distribution::kUniformDistinct, seed);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c.documents()[0].values, (std::vector<Value>{0, 0}));
  }
}

TEST(GenerateDataset, FieldsArePermutations) {
  auto c = generate_dataset(20, Distribution::kUniformDistinct, 1);
  for (std::size_t f = 0; f < 2; ++f) {
    auto values = column(c, f);
    std::sort(values.begin(), values.end());
    EXPECT_EQ(values, iota_values(20));
  }
}

TEST(GenerateDataset, FullSizePermutation) {
  auto c = generate_dataset(100000, Distribution::kUniformDistinct, 7);
  ASSERT_EQ(c.size(), 100000u);
  auto a = column(c, 0);
  auto b = column(c, 1);
  EXPECT_NE(a, b);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, iota_values(100000));
  EXPECT_EQ(b, iota_values(100000));
}

TEST(GenerateDataset, EmptyIsAnError) {
  EXPECT_THROW(generate_dataset(0, Distribution::kUniformDistinct, 1), EmptyCollectionError);
}

TEST(GenerateDataset, SeedDeterminesContent) {
  for (auto dist : {Distribution::kUniformDistinct, Distribution::kUniformWithRepeats,
                    Distribution::kZipfian}) {
    EXPECT_EQ(generate_dataset(500, dist, 3), generate_dataset(500, dist, 3));
    EXPECT_NE(generate_dataset(500, dist, 3), generate_dataset(500, dist, 4));
  }
}

TEST(GenerateDataset, OtherDistributionsStayInDomain) {
  for (auto dist : {Distribution::kUniformWithRepeats, Distribution::kZipfian}) {
    auto c = generate_dataset(1000, dist, 5);
    for (const auto& d : c.documents()) {
      for (Value v : d.values) {
        EXPECT_GE(v, 0);
        EXPECT_LT(v, 1000);
      }
    }
  }
}

TEST(Distribution, NamesRoundTrip) {
  for (auto d : {Distribution::kUniformDistinct, Distribution::kUniformWithRepeats,
                 Distribution::kZipfian}) {
    EXPECT_EQ(parse_distribution(to_string(d)), d);
  }
  EXPECT_THROW(parse_distribution("gaussian"), Error);
}

TEST(Collection, RejectsSparseIds) {
  EXPECT_THROW(Collection("c", {"A"}, {{1, {5}}}), Error);
  EXPECT_THROW(Collection("c", {"A", "B"}, {{0, {5}}}), Error);
  EXPECT_THROW(Collection("c", {"A", "A"}, {}), Error);
}

TEST(Collection, UnknownFieldNamesTheField) {
  auto c = collection_of({{1, 2}});
  try {
    c.field_position("Z");
    FAIL();
  } catch (const UnknownFieldError& e) {
    EXPECT_EQ(e.field(), "Z");
  }
}

TEST(BuildIndex, SortsSingleKey) {
  auto c = collection_of({{5, 0}, {1, 0}, {3, 0}});
  auto idx = build_index(c, {"A"});
  EXPECT_EQ(idx.name(), "A_1");
  ASSERT_EQ(idx.size(), 3u);
  EXPECT_EQ(idx.leading_key(0), 1);
  EXPECT_EQ(idx.record_id(0), 1u);
  EXPECT_EQ(idx.leading_key(1), 3);
  EXPECT_EQ(idx.record_id(1), 2u);
  EXPECT_EQ(idx.leading_key(2), 5);
  EXPECT_EQ(idx.record_id(2), 0u);
}

TEST(BuildIndex, CompoundIsLexicographic) {
  auto c = collection_of({{1, 9}, {1, 2}});
  auto idx = build_index(c, {"A", "B"});
  EXPECT_EQ(idx.name(), "A_1_B_1");
  EXPECT_TRUE(idx.compound());
  EXPECT_EQ(std::vector<Value>(idx.key(0).begin(), idx.key(0).end()),
            (std::vector<Value>{1, 2}));
  EXPECT_EQ(std::vector<Value>(idx.key(1).begin(), idx.key(1).end()),
            (std::vector<Value>{1, 9}));
  EXPECT_EQ(idx.record_id(0), 1u);
  EXPECT_EQ(idx.key_position_of("B"), 1u);
  EXPECT_FALSE(idx.key_position_of("C").has_value());
}

TEST(BuildIndex, EqualKeysOrderedByRecordId) {
  auto c = collection_of({{4, 0}, {4, 0}, {4, 0}});
  auto idx = build_index(c, {"A"});
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(idx.record_id(i), i);
}

TEST(BuildIndex, PermutationEndpoints) {
  auto c = generate_dataset(100000, Distribution::kUniformDistinct, 7);
  auto idx = build_index(c, {"B"});
  EXPECT_EQ(idx.leading_key(0), 0);
  EXPECT_EQ(idx.leading_key(idx.size() - 1), 99999);
}

TEST(BuildIndex, UnknownFieldIsAnError) {
  auto c = collection_of({{1, 2}});
  EXPECT_THROW(build_index(c, {"C"}), UnknownFieldError);
}

TEST(BuildIndex, SeekLeadingIsLowerBound) {
  auto c = collection_of({{1, 0}, {3, 0}, {3, 0}, {8, 0}});
  auto idx = build_index(c, {"A"});
  EXPECT_EQ(idx.seek_leading(0), 0u);
  EXPECT_EQ(idx.seek_leading(3), 1u);
  EXPECT_EQ(idx.seek_leading(4), 3u);
  EXPECT_EQ(idx.seek_leading(9), 4u);
}

TEST(IndexCatalog, RejectsDuplicates) {
  auto c = collection_of({{1, 2}});
  IndexCatalog cat;
  cat.add(build_index(c, {"A"}));
  EXPECT_THROW(cat.add(build_index(c, {"A"})), Error);
  EXPECT_NE(cat.find_single_field("A"), nullptr);
  EXPECT_EQ(cat.find_single_field("B"), nullptr);
}

TEST(Selectivity, WidthOverN) {
  auto c = generate_dataset(100000, Distribution::kUniformDistinct, 7);
  EXPECT_DOUBLE_EQ(selectivity(c, {"A", 0, 20000}), 0.2);
  EXPECT_DOUBLE_EQ(selectivity(c, {"A", 500, 500}), 0.0);
  EXPECT_DOUBLE_EQ(selectivity(c, {"B", 0, 100000}), 1.0);
  EXPECT_DOUBLE_EQ(selectivity(c, {"B", -50, 200000}), 1.0);
}

TEST(Selectivity, IndexAndScanAgree) {
  auto c = generate_dataset(3000, Distribution::kZipfian, 11);
  IndexCatalog cat;
  cat.add(build_index(c, {"A"}));
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const Value lo = uniform_between(rng, -5, 3000);
    const Value hi = uniform_between(rng, -5, 3005);
    RangePredicate p{"A", lo, hi};
    EXPECT_EQ(count_matching(c, p, &cat), count_matching(c, p));
  }
}

TEST(DatasetFile, RoundTrip) {
  auto c = generate_dataset(100, Distribution::kUniformDistinct, 9);
  auto path = std::filesystem::temp_directory_path() / "fptp_roundtrip.csv";
  save_dataset(c, path);
  auto loaded = load_dataset(path);
  std::filesystem::remove(path);
  EXPECT_EQ(loaded.documents(), c.documents());
  EXPECT_EQ(loaded.fields(), c.fields());
  EXPECT_EQ(dataset_fingerprint(loaded), dataset_fingerprint(c));
}

TEST(DatasetFile, LineCountIsHeaderPlusRows) {
  auto text = encode_dataset(generate_dataset(10, Distribution::kUniformDistinct, 1));
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 11);
  EXPECT_EQ(text.substr(0, text.find('\n')), "record_id,A,B");
}

TEST(DatasetFile, NonIntegerReportsLine) {
  try {
    decode_dataset("record_id,A,B\n0,1,2\n1,x,3\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(DatasetFile, MissingColumnReportsLine) {
  try {
    decode_dataset("record_id,A,B\n0,1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(DatasetFile, MissingFileIsIoError) {
  EXPECT_THROW(load_dataset("/nonexistent/dir/data.csv"), IoError);
}

TEST(Fingerprint, SensitiveToValues) {
  auto a = collection_of({{1, 2}, {3, 4}});
  auto b = collection_of({{1, 2}, {4, 3}});
  EXPECT_NE(dataset_fingerprint(a), dataset_fingerprint(b));
}

TEST(Query, ValidationAndOracle) {
  auto c = collection_of({{1, 1}, {2, 5}, {3, 9}, {4, 5}});
  Query q{{{"A", 2, 5}, {"B", 5, 6}}, std::nullopt, std::nullopt};
  validate_query(q, c);
  EXPECT_EQ(matching_record_ids(c, q), (std::vector<RecordId>{1, 3}));

  Query dup{{{"A", 0, 1}, {"A", 0, 1}}, std::nullopt, std::nullopt};
  EXPECT_THROW(validate_query(dup, c), InvalidQueryError);
  Query unknown{{{"A", 0, 1}, {"C", 0, 1}}, std::nullopt, std::nullopt};
  EXPECT_THROW(validate_query(unknown, c), UnknownFieldError);
}

TEST(QueryShape, ConstantsAreElided) {
  Query a{{{"A", 0, 10}, {"B", 5, 6}}, std::nullopt, std::nullopt};
  Query b{{{"A", 70, 90}, {"B", 1, 2}}, std::nullopt, std::nullopt};
  EXPECT_EQ(shape_of(a), shape_of(b));
  b.projection = Projection{{"A", "B"}, true};
  EXPECT_NE(shape_of(a), shape_of(b));
}

}  // namespace
}  // namespace fptp
