#include <gtest/gtest.h>

#include <sstream>
#include <vector>

#include "sumindex/errors.hpp"
#include "sumindex/index_io.hpp"
#include "sumindex/oracle.hpp"
#include "sumindex/report.hpp"

using namespace sumindex;

namespace {

IndexConfig cfg(std::uint64_t seed) {
  IndexConfig c;
  c.seed = seed;
  c.prime_constant = 1.0;
  return c;
}

}  // namespace

TEST(AdviceFile, RoundTrip) {
  for (InstanceKind kind : {InstanceKind::sum3, InstanceKind::sumk, InstanceKind::xork}) {
    const Instance inst = gen_instance(Profile::uniform, 3, {kind, 24, 24, 4, 20, 1 << 10});
    Index a = Index::build(inst, cfg(5));
    const auto bytes = serialize_index(a);
    Index b = deserialize_index(bytes, inst);
    EXPECT_EQ(b.ell(), a.ell());
    const OracleTable oracle(inst);
    for (std::uint64_t y = 0; y < 1500; ++y) {
      const auto x = a.query(y), z = b.query(y);
      ASSERT_EQ(x, z) << kind_name(kind) << ' ' << y;
      ASSERT_EQ(x.has_value(), oracle.query(y).member) << y;
    }
    EXPECT_EQ(serialize_index(b), bytes);
  }
}

TEST(AdviceFile, DigestMismatch) {
  const Instance inst = gen_instance(Profile::uniform, 3, {InstanceKind::sum3, 24, 24, 3, 0, 1 << 10});
  Instance other = inst;
  other.A[0] ^= 1;
  const auto bytes = serialize_index(Index::build(inst, cfg(1)));
  EXPECT_THROW(deserialize_index(bytes, other), DigestMismatch);
}

TEST(AdviceFile, TruncatedOrPadded) {
  const Instance inst = gen_instance(Profile::uniform, 3, {InstanceKind::sum3, 24, 24, 3, 0, 1 << 10});
  const auto bytes = serialize_index(Index::build(inst, cfg(1)));
  auto cut = bytes;
  cut.resize(cut.size() - 3);
  EXPECT_THROW(deserialize_index(cut, inst), FormatError);
  auto longer = bytes;
  longer.push_back(0);
  EXPECT_THROW(deserialize_index(longer, inst), FormatError);
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(deserialize_index(bad, inst), FormatError);
}

TEST(Report, JsonKeyOrder) {
  const Instance inst = gen_instance(Profile::uniform, 1, {InstanceKind::sum3, 32, 32, 3, 0, 1 << 10});
  Index idx = Index::build(inst, cfg(2));
  const OracleTable oracle(inst);
  std::vector<std::uint64_t> ys(oracle.values().begin(), oracle.values().begin() + 20);
  const CostReport r = measure_weak_copy(idx, ys, &oracle);
  const auto j = to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  const std::vector<std::string> expected{
      "config", "advice_bits", "advice_bytes", "copies", "ell", "preprocess_evals",
      "wall_times", "queries", "members", "answered", "false_positives", "success_rate",
      "median_evals", "median_probes", "probes_per_query", "evals_per_query"};
  EXPECT_EQ(keys, expected);
  EXPECT_EQ(j["config"].begin().key(), "mode");
  EXPECT_EQ(r.members, 20u);
  EXPECT_EQ(r.false_positives, 0u);
  EXPECT_EQ(r.queries, 20u);
  EXPECT_GT(r.advice_bits, idx.witness_bits());
}

TEST(Report, CsvShape) {
  const Instance inst = gen_instance(Profile::uniform, 1, {InstanceKind::sum3, 16, 16, 3, 0, 1 << 10});
  Index idx = Index::build(inst, cfg(2));
  const std::vector<std::uint64_t> ys{1, 2, 3};
  const std::string row = csv_row(measure_weak_copy(idx, ys, nullptr));
  const auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  EXPECT_EQ(commas(row), commas(csv_header()));
  EXPECT_EQ(row.substr(0, 2), std::to_string(kCsvSchemaVersion) + ",");
}

TEST(Report, Medians) {
  EXPECT_EQ(median(std::vector<std::uint64_t>{5, 1, 3}), 3.0);
  EXPECT_EQ(median(std::vector<std::uint64_t>{4, 1, 3, 2}), 2.5);
  EXPECT_EQ(median(std::vector<double>{}), 0.0);
}

TEST(Report, SlopeFit) {
  const std::vector<double> xs{1, 2, 3, 4}, ys{3, 5.5, 8, 10.5};
  EXPECT_DOUBLE_EQ(fit_slope(xs, ys), 2.5);
  const std::vector<double> one{1};
  EXPECT_THROW(fit_slope(one, one), std::invalid_argument);
}
