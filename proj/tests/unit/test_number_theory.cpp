#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <vector>

#include "sumindex/errors.hpp"
#include "sumindex/number_theory.hpp"

using namespace sumindex;

namespace {

bool trial_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST(PrimeInterval, ClosedFormSmall) {
  const PrimeInterval iv = prime_interval(1, 8, 50);
  EXPECT_EQ(iv.lo, 142u);
  EXPECT_EQ(iv.hi, 284u);
}

TEST(PrimeInterval, ClosedFormLarger) {
  const PrimeInterval iv = prime_interval(50, 1ULL << 20, 50);
  EXPECT_EQ(iv.lo, 97454u);
  EXPECT_EQ(iv.hi, 194908u);
  EXPECT_EQ(prime_interval(64, 1024, 1.0).lo, 992u);
}

TEST(PrimeInterval, Deterministic) {
  const PrimeInterval a = prime_interval(33, 12345, 3.5), b = prime_interval(33, 12345, 3.5);
  EXPECT_EQ(a.lo, b.lo);
  EXPECT_EQ(a.hi, b.hi);
}

TEST(PrimeInterval, RejectsBadArguments) {
  EXPECT_THROW(prime_interval(1, 7, 50), std::invalid_argument);
  EXPECT_THROW(prime_interval(0, 8, 50), std::invalid_argument);
  EXPECT_THROW(prime_interval(1, 8, 0), std::invalid_argument);
}

TEST(PrimeInterval, CountMeetsBound) {
  const PrimeInterval iv = prime_interval(50, 1ULL << 20, 50);
  const std::uint64_t count = count_primes(iv);
  EXPECT_EQ(count, 8194u);
  EXPECT_NEAR(required_prime_count(50, 1ULL << 20), 1116.258, 1e-3);
  EXPECT_GE(static_cast<double>(count), required_prime_count(50, 1ULL << 20));
}

TEST(PrimeInterval, CountMeetsBoundFromMinN) {
  for (std::uint64_t n : {1, 2, 3, 4, 8, 16, 50, 64, 200}) {
    for (std::uint64_t M : {8ULL, 1ULL << 10, 1ULL << 16, 1ULL << 20}) {
      const std::uint64_t count = count_primes(prime_interval(n, M, 50));
      const bool ok = n > 1 && static_cast<double>(count) >= required_prime_count(n, M);
      if (n >= kPrimeCountMinN) {
        EXPECT_TRUE(ok) << n << ' ' << M;
      } else {
        RecordProperty("below_min_n_" + std::to_string(n) + "_" + std::to_string(M), ok ? "holds" : "fails");
      }
    }
  }
}

TEST(Primes, CountSmall) {
  EXPECT_EQ(count_primes(make_interval(10, 20)), 4u);
  EXPECT_EQ(count_primes(make_interval(2, 2)), 1u);
  EXPECT_EQ(count_primes(make_interval(14, 16)), 0u);
  EXPECT_EQ(count_primes(make_interval(0, 100000)), 9592u);
}

TEST(Primes, CountRefusesPastBudget) {
  EXPECT_THROW(count_primes(make_interval(10, 1000), 500), BudgetExceeded);
}

TEST(Primes, MillerRabinAgreesWithTrialDivision) {
  for (std::uint64_t n = 0; n < 20000; ++n) ASSERT_EQ(is_prime(n), trial_prime(n)) << n;
}

TEST(Primes, MillerRabinLargeCases) {
  EXPECT_TRUE(is_prime((1ULL << 61) - 1));
  EXPECT_TRUE(is_prime(18446744073709551557ULL));  // largest 64-bit prime
  EXPECT_FALSE(is_prime(18446744073709551557ULL - 2));
  for (std::uint64_t c : {561ULL, 1105ULL, 1729ULL, 3215031751ULL, 3825123056546413051ULL})
    EXPECT_FALSE(is_prime(c)) << c;
  EXPECT_FALSE(is_prime(4294967291ULL * 4294967279ULL));
}

TEST(Primes, SampleFromSmallInterval) {
  Rng rng(11);
  const PrimeInterval iv = make_interval(10, 20);
  std::map<std::uint64_t, int> freq;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++freq[sample_prime(iv, rng)];
  ASSERT_EQ(freq.size(), 4u);
  double chi2 = 0;
  for (std::uint64_t p : {11, 13, 17, 19}) {
    ASSERT_TRUE(freq.count(p));
    EXPECT_NEAR(freq[p], 2500, 150) << p;
    chi2 += std::pow(freq[p] - 2500.0, 2) / 2500.0;
  }
  EXPECT_LT(chi2, 16.27);  // 3 dof, p = 0.001
}

TEST(Primes, SampleFromPrimelessIntervalThrows) {
  Rng rng(1);
  EXPECT_THROW(sample_prime(make_interval(14, 16), rng, 1000), std::runtime_error);
}

TEST(F2, RankBasics) {
  EXPECT_EQ(F2Matrix::identity(10).rank(), 10u);
  F2Matrix m(3, 8);
  EXPECT_EQ(m.rank(), 0u);
  m.set_row(0, 0b101);
  m.set_row(1, 0b011);
  m.set_row(2, 0b110);  // sum of the first two
  EXPECT_EQ(m.rank(), 2u);
  EXPECT_FALSE(m.full_rank());
}

TEST(F2, SampledMatricesAreFullRank) {
  Rng rng(5);
  for (unsigned k = 1; k <= 12; ++k) EXPECT_TRUE(sample_full_rank(k, k, rng).full_rank());
  const F2Matrix v = sample_full_rank(1, 8, rng);
  EXPECT_NE(v.row(0), 0u);
}

TEST(F2, RejectionRateIsSmall) {
  Rng rng(6);
  std::uint64_t rejected = 0;
  for (int i = 0; i < 1000; ++i) {
    std::uint64_t r = 0;
    sample_full_rank(10, 24, rng, &r);
    rejected += r;
  }
  // a 10 x 24 draw is singular with probability about 2^-14
  EXPECT_LT(static_cast<double>(rejected) / (1000 + rejected), 0.01);
}

TEST(F2, MatvecLinearity) {
  Rng rng(7);
  const F2Matrix id = F2Matrix::identity(20);
  EXPECT_EQ(f2_matvec(id, 0xABCDE), 0xABCDEu);
  const F2Matrix m = sample_full_rank(12, 20, rng);
  EXPECT_EQ(f2_matvec(m, 0), 0u);
  for (int t = 0; t < 200; ++t) {
    const std::uint64_t u = rng() & 0xFFFFF, v = rng() & 0xFFFFF;
    EXPECT_EQ(f2_matvec(m, u ^ v), f2_matvec(m, u) ^ f2_matvec(m, v));
  }
  EXPECT_THROW(f2_matvec(m, 1ULL << 20), std::invalid_argument);
}

TEST(F2, BatchMatchesSingle) {
  Rng rng(8);
  const F2Matrix m = sample_full_rank(17, 30, rng);
  std::vector<std::uint64_t> in(333), out(333);
  for (auto& x : in) x = rng() & ((1ULL << 30) - 1);
  f2_matvec_batch(m, in, out);
  for (std::size_t i = 0; i < in.size(); ++i) EXPECT_EQ(out[i], f2_matvec(m, in[i]));
}
