#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "sumindex/baselines.hpp"
#include "sumindex/errors.hpp"
#include "sumindex/oracle.hpp"

using namespace sumindex;

namespace {

Instance tiny() {
  Instance i;
  i.kind = InstanceKind::sum3;
  i.A = {1, 2, 4};
  i.B = {1, 2, 4};
  i.M = 8;
  return i;
}

}  // namespace

TEST(Oracle, TinyInstance) {
  const Instance i = tiny();
  const OracleAnswer a = oracle_query(i, 3);
  EXPECT_TRUE(a.member);
  EXPECT_EQ(a.witness, std::vector<std::uint64_t>({0, 1}));
  EXPECT_FALSE(oracle_query(i, 100).member);
  EXPECT_FALSE(oracle_query(i, 7).member);
  const OracleTable t(i);
  EXPECT_EQ(t.values(), std::vector<std::uint64_t>({2, 3, 4, 5, 6, 8}));
  EXPECT_EQ(t.query(3).witness, a.witness);
}

TEST(Oracle, TableAgreesWithMeetInTheMiddle) {
  for (Profile p : kAllProfiles) {
    const Instance inst = gen_instance(p, 2, {InstanceKind::sumk, 12, 0, 5, 0, 200});
    const OracleTable t(inst);
    for (std::uint64_t y = 0; y <= 4 * 200; y += 3) {
      const OracleAnswer a = oracle_query(inst, y), b = t.query(y);
      ASSERT_EQ(a.member, b.member) << y;
      EXPECT_EQ(a.witness, b.witness);
      if (a.member) EXPECT_EQ(tuple_value(inst, *a.witness), y);
    }
  }
}

TEST(Oracle, AgreesWithSortedSumset) {
  const Instance inst = gen_instance(Profile::uniform, 7, {InstanceKind::sum3, 64, 64, 3, 0, 1 << 10});
  const OracleTable t(inst);
  const SortedSumsetBaseline s(inst.A, inst.B, inst.M);
  EXPECT_EQ(t.values(), s.values());
  for (std::uint64_t y = 0; y <= 2 * inst.M; ++y) {
    const auto w = s.query(y);
    const OracleAnswer a = t.query(y);
    ASSERT_EQ(w.has_value(), a.member);
    if (w) EXPECT_EQ((std::vector<std::uint64_t>{w->first, w->second}), *a.witness);
  }
}

TEST(Oracle, RefusesHugeEnumeration) {
  const Instance inst = gen_instance(Profile::uniform, 1, {InstanceKind::sumk, 100, 0, 6, 0, 1000});
  EXPECT_THROW(oracle_query(inst, 5), BudgetExceeded);
}

TEST(Generators, Deterministic) {
  const GenParams gp{InstanceKind::sum3, 64, 0, 3, 0, 1 << 16};
  for (Profile p : kAllProfiles) {
    EXPECT_EQ(gen_instance(p, 7, gp), gen_instance(p, 7, gp));
    EXPECT_NE(gen_instance(p, 7, gp), gen_instance(p, 8, gp));
  }
}

TEST(Generators, DuplicatesProfile) {
  const Instance i = gen_instance(Profile::duplicates, 3, {InstanceKind::sum3, 64, 0, 3, 0, 1 << 16});
  const std::set<std::uint64_t> distinct(i.A.begin(), i.A.end());
  EXPECT_GE(i.A.size() - distinct.size(), 64u / 4);
}

TEST(Generators, ProgressionSumset) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Instance i = gen_instance(Profile::arithmetic, seed, {InstanceKind::sum3, 64, 0, 3, 0, 1 << 16});
    EXPECT_EQ(baseline_sorted_sumset(i.A, i.M).size(), 2 * 64u - 1);
  }
}

TEST(Generators, ClusteredCollides) {
  const GenParams gp{InstanceKind::sum3, 64, 0, 3, 0, 1 << 16};
  const Instance c = gen_instance(Profile::clustered, 1, gp);
  const Instance u = gen_instance(Profile::uniform, 1, gp);
  EXPECT_LT(OracleTable(c).values().size(), OracleTable(u).values().size());
}

TEST(Generators, ProfileNames) {
  for (Profile p : kAllProfiles) EXPECT_EQ(parse_profile(profile_name(p)), p);
  EXPECT_EQ(parse_profile("ap"), Profile::arithmetic);
  EXPECT_THROW(parse_profile("zipf"), std::invalid_argument);
}

TEST(Baselines, TinyInstance) {
  const std::vector<std::uint64_t> A{1, 2, 4};
  const SortedArrayBaseline arr = baseline_sorted_array(A, 8);
  const SortedSumsetBaseline set = baseline_sorted_sumset(A, 8);
  for (const auto& ans : {arr.query(6), set.query(6)}) {
    ASSERT_TRUE(ans.has_value());
    EXPECT_EQ(A[ans->first] + A[ans->second], 6u);
  }
  EXPECT_EQ(set.query(6), std::make_pair(std::uint64_t{1}, std::uint64_t{2}));
  EXPECT_FALSE(arr.query(11).has_value());
  EXPECT_FALSE(set.query(11).has_value());
}

TEST(Baselines, SizesAndProbes) {
  const Instance inst = gen_instance(Profile::uniform, 4, {InstanceKind::sum3, 256, 0, 3, 0, 1 << 20});
  const SortedArrayBaseline arr(inst.A, inst.B, inst.M);
  const SortedSumsetBaseline set(inst.A, inst.B, inst.M);
  const double word = 21;
  EXPECT_LT(arr.advice_bits() / (256 * word), 4.0);
  EXPECT_GT(arr.advice_bits() / (256 * word), 0.5);
  EXPECT_LT(set.advice_bits() / (256.0 * 256 * word), 4.0);
  EXPECT_GT(set.advice_bits() / (256.0 * 256 * word), 0.5);
  for (std::uint64_t y = 0; y < 1000; ++y) {
    QueryStats st;
    set.query(inst.A[y % 256] + inst.B[(y * 7) % 256], &st);
    EXPECT_LE(st.probes, 2 * 16u);  // 2 log2(n^2)
  }
}
