#include <gtest/gtest.h>

#include <memory>
#include <vector>

#include "sumindex/errors.hpp"
#include "sumindex/oracle.hpp"
#include "sumindex/sum_indexing.hpp"

using namespace sumindex;

namespace {

std::uint64_t brute_fd(const std::vector<std::uint64_t>& A, const std::vector<std::uint64_t>& B,
                       std::uint64_t p, std::uint64_t q, std::uint64_t z, std::uint64_t d,
                       std::uint64_t i) {
  for (std::uint64_t j = 0; j < B.size(); ++j)
    if ((A[i] + B[j]) % q == d) return (A[i] + B[j]) % p;
  return z;
}

IndexConfig config(double delta, std::uint64_t seed, double c = 1.0) {
  IndexConfig cfg;
  cfg.delta = delta;
  cfg.seed = seed;
  cfg.prime_constant = c;
  return cfg;
}

}  // namespace

TEST(Aux3Sum, SinglePair) {
  const std::vector<std::uint64_t> A{3}, B{4};
  const Aux3Sum aux = build_aux_3sum(A, B, 7, 5, 6);
  EXPECT_EQ(eval_fd_3sum(aux, 2, 0), 0u);  // 7 = 2 mod 5, 7 mod 7 = 0
  EXPECT_EQ(eval_fd_3sum(aux, 1, 0), 6u);  // no j lands in class 1
}

TEST(Aux3Sum, MatchesBruteForce) {
  Rng rng(1);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<std::uint64_t> A(32), B(32);
    for (auto& a : A) a = uniform_between(rng, 0, 500);
    for (auto& b : B) b = uniform_between(rng, 0, 500);
    const std::uint64_t p = 101, q = 37, z = 55;
    const Aux3Sum aux = build_aux_3sum(A, B, p, q, z);
    for (std::uint64_t d = 0; d < q; ++d)
      for (std::uint64_t i = 0; i < A.size(); ++i)
        ASSERT_EQ(eval_fd_3sum(aux, d, i), brute_fd(A, B, p, q, z, d, i)) << d << ' ' << i;
  }
}

TEST(Aux3Sum, SerializeRoundTrip) {
  const std::vector<std::uint64_t> A{5, 1, 9, 1}, B{2, 2, 0};
  const Aux3Sum aux = build_aux_3sum(A, B, 13, 11, 4);
  EXPECT_EQ(Aux3Sum::parse(aux.serialize(16)), aux);
  auto bytes = aux.serialize(16);
  bytes.pop_back();
  EXPECT_THROW(Aux3Sum::parse(bytes), FormatError);
}

TEST(Map3Sum, Residues) {
  EXPECT_EQ(map_3sum(100, 11, 7), std::make_pair(std::uint64_t{2}, std::uint64_t{1}));
  EXPECT_EQ(map_3sum(0, 11, 7), std::make_pair(std::uint64_t{0}, std::uint64_t{0}));
  EXPECT_EQ(map_3sum(77, 11, 7), std::make_pair(std::uint64_t{0}, std::uint64_t{0}));
}

TEST(Translate3Sum, HitAndMiss) {
  const std::vector<std::uint64_t> A{3}, B{4};
  const Aux3Sum aux = build_aux_3sum(A, B, 7, 5, 0);
  EXPECT_EQ(translate_3sum(aux, 7, 0), std::make_pair(std::uint64_t{0}, std::uint64_t{0}));
  // a miss is the (0, 0) sentinel, which the outer check then rejects
  const auto miss = translate_3sum(aux, 6, 0);
  EXPECT_EQ(miss, std::make_pair(std::uint64_t{0}, std::uint64_t{0}));
  EXPECT_NE(A[miss.first] + B[miss.second], 6u);
}

TEST(Translate3Sum, LeastIndexAmongDuplicates) {
  const std::vector<std::uint64_t> A{10, 20}, B{7, 3, 7, 3, 5};
  const Aux3Sum aux = build_aux_3sum(A, B, 29, 23, 0);
  for (std::uint64_t i = 0; i < A.size(); ++i) {
    for (std::uint64_t b : {3, 5, 7}) {
      std::uint64_t least = 0;
      while (B[least] != b) ++least;
      EXPECT_EQ(translate_3sum(aux, A[i] + b, i).second, least);
    }
  }
}

TEST(SumDecomposition, PrimesFromIntervals) {
  auto in = std::make_shared<SumInput>();
  Rng gen(9);
  for (int i = 0; i < 64; ++i) in->A.push_back(uniform_below(gen, 1 << 16));
  in->B = in->A;
  in->M = (1 << 16) - 1;
  in->max_sum = 2 * in->M;
  Rng r1(4), r2(4);
  const SumDecomposition d = SumDecomposition::sample(in, 50, r1);
  const PrimeInterval i1 = prime_interval(64, in->M, 50);
  EXPECT_TRUE(is_prime(d.aux().p));
  EXPECT_TRUE(is_prime(d.aux().q));
  EXPECT_GE(d.aux().p, i1.lo);
  EXPECT_LE(d.aux().p, i1.hi);
  EXPECT_GE(d.aux().q, i1.lo);
  EXPECT_LE(d.aux().q, i1.hi);
  EXPECT_LT(d.aux().z, d.aux().p);
  EXPECT_EQ(d.sub_count(), d.aux().q);
  EXPECT_EQ(d.sub_domain(), 64u);
  EXPECT_EQ(d.sub_range(), d.aux().p);
  const SumDecomposition e = SumDecomposition::sample(in, 50, r2);
  EXPECT_EQ(d.aux(), e.aux());
  // fast path agrees with the reference
  for (std::uint64_t dd = 0; dd < 200; ++dd)
    for (std::uint64_t i = 0; i < 64; ++i) ASSERT_EQ(d.eval_fd(dd, i), eval_fd_3sum(d.aux(), dd, i));
}

TEST(Index3Sum, TinyInstance) {
  const std::vector<std::uint64_t> A{1, 2, 4};
  Index idx = preprocess_3sum(A, A, 8, config(1.0, 3));
  const auto hit = query_3sum(idx, 8);
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(A[hit->first] + A[hit->second], 8u);
  EXPECT_FALSE(query_3sum(idx, 1000).has_value());
  EXPECT_FALSE(query_3sum(idx, 7).has_value());
}

TEST(Index3Sum, SmallUniverseUsesTable) {
  const std::vector<std::uint64_t> A{0};
  Index idx = preprocess_3sum(A, A, 0, config(0.75, 1));
  EXPECT_TRUE(idx.trivial());
  EXPECT_EQ(query_3sum(idx, 0), std::make_pair(std::uint64_t{0}, std::uint64_t{0}));
  EXPECT_FALSE(query_3sum(idx, 1).has_value());
}

TEST(Index3Sum, AmplifiedAnswersEveryMember) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Instance inst = gen_instance(Profile::uniform, seed, {InstanceKind::sum3, 64, 64, 3, 0, 1 << 12});
    const OracleTable oracle(inst);
    Index idx = Index::build(inst, config(0.75, seed + 10));
    std::uint64_t failed = 0;
    for (std::uint64_t y : oracle.values()) {
      const auto t = idx.query(y);
      if (!t) {
        ++failed;
        continue;
      }
      EXPECT_EQ(tuple_value(inst, *t), y);
    }
    EXPECT_LE(failed, 0u);
    for (std::uint64_t y = 0; y < 200; ++y)
      if (!oracle.query(y).member) EXPECT_FALSE(idx.query(y).has_value());
  }
}

TEST(Index3Sum, StreamedMatchesResident) {
  const Instance inst = gen_instance(Profile::clustered, 5, {InstanceKind::sum3, 40, 48, 3, 0, 1 << 10});
  Index idx = Index::build(inst, config(0.75, 2));
  std::vector<std::uint64_t> ys;
  for (std::uint64_t y = 0; y < 2048; y += 5) ys.push_back(y);
  const auto streamed = idx.query_streamed(ys);
  for (std::size_t i = 0; i < ys.size(); ++i) EXPECT_EQ(streamed[i], idx.query(ys[i])) << ys[i];
}

TEST(KSumSet, Enumeration) {
  const std::vector<std::uint64_t> A{1, 2};
  const WitnessedSumset s3 = build_ksum_sumset(A, 3);
  EXPECT_EQ(s3.values, std::vector<std::uint64_t>({1, 2}));
  EXPECT_EQ(s3.witnesses, std::vector<std::uint32_t>({0, 1}));
  const WitnessedSumset s4 = build_ksum_sumset(A, 4);
  EXPECT_EQ(s4.values, std::vector<std::uint64_t>({2, 3, 3, 4}));
  EXPECT_EQ(s4.witnesses, std::vector<std::uint32_t>({0, 0, 0, 1, 1, 0, 1, 1}));
}

TEST(KSumSet, WitnessesRecomputeValues) {
  Rng rng(2);
  std::vector<std::uint64_t> A(16);
  for (auto& a : A) a = uniform_below(rng, 1000);
  const WitnessedSumset s = build_ksum_sumset(A, 4);
  ASSERT_EQ(s.size(), 256u);
  for (std::uint64_t j = 0; j < s.size(); ++j) {
    std::uint64_t v = 0;
    for (std::uint32_t w : s.witness(j)) v += A[w];
    EXPECT_EQ(v, s.values[j]);
  }
  EXPECT_THROW(build_ksum_sumset(A, 6, 1000), BudgetExceeded);
}

TEST(KSum, SmallQuery) {
  const std::vector<std::uint64_t> A{1, 2, 3};
  Index idx = preprocess_ksum(A, 4, 16, config(1.0, 4));
  const auto t = query_ksum(idx, 6);
  ASSERT_TRUE(t.has_value());
  ASSERT_EQ(t->size(), 3u);
  EXPECT_EQ(A[(*t)[0]] + A[(*t)[1]] + A[(*t)[2]], 6u);
  EXPECT_FALSE(query_ksum(idx, 10).has_value());
  EXPECT_FALSE(query_ksum(idx, 1).has_value());
}

TEST(KSum, KEqualsThreeIsPlain3Sum) {
  const Instance inst = gen_instance(Profile::uniform, 8, {InstanceKind::sum3, 32, 32, 3, 0, 512});
  Instance same = inst;
  same.B = inst.A;
  Index a = preprocess_ksum(inst.A, 3, 512, config(0.75, 6));
  Index b = preprocess_3sum(inst.A, inst.A, 512, config(0.75, 6));
  for (std::uint64_t y = 0; y <= 1024; ++y) {
    const auto x = query_ksum(a, y);
    const auto z = query_3sum(b, y);
    ASSERT_EQ(x.has_value(), z.has_value()) << y;
    if (x) EXPECT_EQ(inst.A[(*x)[0]] + inst.A[(*x)[1]], y);
  }
}
