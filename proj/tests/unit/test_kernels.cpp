#include <gtest/gtest.h>

#include <vector>

#include "sumindex/kernels.hpp"
#include "sumindex/mixing.hpp"
#include "sumindex/rng.hpp"

namespace k = sumindex::kernels;

namespace {

bool have_avx2() { return k::isa_available(k::Isa::avx2); }

}  // namespace

TEST(Kernels, ScalarSplitmixMatchesDefinition) {
  std::vector<std::uint64_t> out(37);
  k::scalar::splitmix_reduce(99, 5, 1000, out);
  for (std::size_t i = 0; i < out.size(); ++i)
    EXPECT_EQ(out[i], sumindex::reduce(sumindex::splitmix_at(99, 5 + i), 1000));
}

TEST(Kernels, SplitmixAvx2EqualsScalar) {
  if (!have_avx2()) GTEST_SKIP() << "no avx2";
  const std::uint64_t bounds[] = {1, 2, 7, 1000, 1ULL << 32, (1ULL << 32) + 1, ~0ULL};
  for (std::size_t len : {0u, 1u, 3u, 4u, 5u, 63u, 64u, 1000u}) {
    for (std::uint64_t b : bounds) {
      std::vector<std::uint64_t> a(len), v(len);
      k::scalar::splitmix_reduce(0xABCDEF ^ len, 17, b, a);
      k::avx2::splitmix_reduce(0xABCDEF ^ len, 17, b, v);
      ASSERT_EQ(a, v) << "len " << len << " bound " << b;
    }
  }
}

TEST(Kernels, F2ApplyAvx2EqualsScalar) {
  if (!have_avx2()) GTEST_SKIP() << "no avx2";
  sumindex::Rng rng(3);
  for (std::size_t cols : {1u, 5u, 24u, 63u, 64u}) {
    std::vector<std::uint64_t> c(cols);
    for (auto& x : c) x = rng();
    for (std::size_t len : {0u, 1u, 3u, 4u, 9u, 257u}) {
      std::vector<std::uint64_t> in(len), a(len), v(len);
      const std::uint64_t mask = cols == 64 ? ~0ULL : (1ULL << cols) - 1;
      for (auto& x : in) x = rng() & mask;
      k::scalar::f2_apply(c, in, a);
      k::avx2::f2_apply(c, in, v);
      ASSERT_EQ(a, v) << cols << " x " << len;
    }
  }
}

TEST(Kernels, PopcountAvx2EqualsScalar) {
  if (!have_avx2()) GTEST_SKIP() << "no avx2";
  sumindex::Rng rng(4);
  for (std::size_t len : {0u, 1u, 3u, 4u, 5u, 16u, 1001u}) {
    std::vector<std::uint64_t> w(len);
    for (auto& x : w) x = rng();
    EXPECT_EQ(k::scalar::popcount(w), k::avx2::popcount(w));
  }
  std::vector<std::uint64_t> ones(13, ~0ULL);
  EXPECT_EQ(k::scalar::popcount(ones), 13u * 64);
}

TEST(Kernels, DispatchCanBePinned) {
  const k::Isa before = k::active_isa();
  k::set_isa(k::Isa::scalar);
  EXPECT_EQ(k::active_isa(), k::Isa::scalar);
  std::vector<std::uint64_t> a(10), b(10);
  k::splitmix_reduce(1, 0, 50, a);
  k::scalar::splitmix_reduce(1, 0, 50, b);
  EXPECT_EQ(a, b);
  if (!have_avx2()) EXPECT_THROW(k::set_isa(k::Isa::avx2), std::invalid_argument);
  k::set_isa(before);
  EXPECT_EQ(k::isa_name(k::Isa::scalar), "scalar");
}
