#include <gtest/gtest.h>

#include <memory>
#include <vector>

#include "sumindex/kxor_indexing.hpp"
#include "sumindex/oracle.hpp"

using namespace sumindex;

namespace {

std::uint64_t brute_fd(const AuxKXor& aux, const std::vector<std::uint64_t>& A,
                       const std::vector<std::uint64_t>& B, std::uint64_t d, std::uint64_t i) {
  for (std::uint64_t j = 0; j < B.size(); ++j)
    if (f2_matvec(aux.Q, A[i] ^ B[j]) == d) return f2_matvec(aux.P, A[i] ^ B[j]);
  return aux.z;
}

}  // namespace

TEST(KXor, FdMatchesBruteForce) {
  Rng rng(1);
  std::vector<std::uint64_t> A(16);
  for (auto& a : A) a = uniform_below(rng, 256);
  const F2Matrix P = sample_full_rank(7, 8, rng), Q = sample_full_rank(5, 8, rng);
  const AuxKXor aux = build_aux_kxor(A, A, P, Q, 9);
  for (std::uint64_t d = 0; d < 32; ++d)
    for (std::uint64_t i = 0; i < 16; ++i) ASSERT_EQ(eval_fd_kxor(aux, d, i), brute_fd(aux, A, A, d, i));
  EXPECT_EQ(AuxKXor::parse(aux.serialize()), aux);
}

TEST(KXor, DirectHitWithIdentityQ) {
  const std::vector<std::uint64_t> A{0x12, 0x34}, B{0x56, 0x78};
  Rng rng(2);
  const AuxKXor aux = build_aux_kxor(A, B, sample_full_rank(6, 8, rng), F2Matrix::identity(8), 0);
  EXPECT_EQ(eval_fd_kxor(aux, A[0] ^ B[0], 0), f2_matvec(aux.P, A[0] ^ B[0]));
}

TEST(KXor, DecompositionMapsAreLinear) {
  auto in = std::make_shared<XorInput>();
  Rng gen(3);
  for (int i = 0; i < 64; ++i) in->A.push_back(uniform_below(gen, 1 << 20));
  in->B = in->A;
  in->ell_bits = 20;
  Rng rng(4);
  const XorDecomposition d = XorDecomposition::sample(in, 3, rng);
  EXPECT_TRUE(d.aux().P.full_rank());
  EXPECT_TRUE(d.aux().Q.full_rank());
  EXPECT_EQ(d.aux().p(), 9u);
  EXPECT_EQ(d.aux().q(), 9u);
  EXPECT_EQ(d.map1(0), 0u);
  for (int t = 0; t < 500; ++t) {
    const std::uint64_t u = uniform_below(gen, 1 << 20), v = uniform_below(gen, 1 << 20);
    EXPECT_EQ(d.map1(u ^ v), d.map1(u) ^ d.map1(v));
    EXPECT_EQ(d.map2(u ^ v), d.map2(u) ^ d.map2(v));
  }
  for (std::uint64_t dd = 0; dd < 512; dd += 7)
    for (std::uint64_t i = 0; i < 64; ++i) ASSERT_EQ(d.eval_fd(dd, i), eval_fd_kxor(d.aux(), dd, i));
}

TEST(KXor, TableThreshold) {
  EXPECT_TRUE(kxor_uses_table(1024, 14));
  EXPECT_FALSE(kxor_uses_table(1024, 15));
  EXPECT_EQ(kxor_dimensions(1024, 1024, 24), std::make_pair(13u, 13u));
  EXPECT_EQ(kxor_dimensions(1024, 1024, 12), std::make_pair(12u, 12u));
}

TEST(KXor, SelfXor) {
  Instance inst;
  inst.kind = InstanceKind::xork;
  inst.k = 3;
  inst.ell_bits = 4;
  inst.M = 15;
  inst.A = {1};
  IndexConfig cfg;
  Index idx = Index::build(inst, cfg);
  const auto t = idx.query(0);
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(*t, std::vector<std::uint64_t>({0, 0}));
  EXPECT_FALSE(idx.query(1).has_value());
}

TEST(KXor, IndexAnswersMembers) {
  const Instance inst = gen_instance(Profile::uniform, 2, {InstanceKind::xork, 64, 0, 3, 16, 0});
  const OracleTable oracle(inst);
  IndexConfig cfg;
  cfg.seed = 8;
  Index idx = Index::build(inst, cfg);
  EXPECT_FALSE(idx.trivial());
  std::uint64_t failed = 0;
  for (std::uint64_t y : oracle.values()) {
    const auto t = idx.query(y);
    if (!t) ++failed;
    else EXPECT_EQ(tuple_value(inst, *t), y);
  }
  EXPECT_EQ(failed, 0u);
  for (std::uint64_t y = 0; y < 3000; ++y)
    if (!oracle.query(y).member) ASSERT_FALSE(idx.query(y).has_value());
}

TEST(KXor, FourWayWitnesses) {
  const Instance inst = gen_instance(Profile::uniform, 3, {InstanceKind::xork, 12, 0, 4, 10, 0});
  const WitnessedSumset s = build_kxor_set(inst.A, 4);
  for (std::uint64_t j = 0; j < s.size(); ++j)
    EXPECT_EQ(inst.A[s.witness(j)[0]] ^ inst.A[s.witness(j)[1]], s.values[j]);
}
