#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sumindex/rng.hpp"

namespace sumindex {

struct PrimeInterval {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t count_target = 0;
  std::uint64_t max_value = 0;
  double c = 50.0;
};

inline constexpr double kDefaultPrimeConstant = 50.0;
inline constexpr std::uint64_t kDefaultSieveMax = 1ULL << 34;
inline constexpr std::uint64_t kDefaultPrimeAttempts = 1ULL << 20;

/// lo = ceil(c * n * ln(2M) * ln ln(2M)), hi = 2 lo. Requires M >= 8, n >= 1, c > 0.
PrimeInterval prime_interval(std::uint64_t count_target, std::uint64_t max_value,
                             double c = kDefaultPrimeConstant);

/// Plain interval [lo, hi] for sampling and counting.
PrimeInterval make_interval(std::uint64_t lo, std::uint64_t hi);

/// Deterministic Miller-Rabin; exact for every 64-bit input.
bool is_prime(std::uint64_t n) noexcept;

/// Uniform prime in [lo, hi] by rejection. Throws std::runtime_error after
/// max_attempts draws without a prime.
std::uint64_t sample_prime(const PrimeInterval& interval, Rng& rng,
                           std::uint64_t max_attempts = kDefaultPrimeAttempts);

/// Exact prime count in [lo, hi] by segmented sieve. Throws BudgetExceeded
/// when hi > sieve_max.
std::uint64_t count_primes(const PrimeInterval& interval,
                           std::uint64_t sieve_max = kDefaultSieveMax);

/// 6 n log_n(2M), the prime count the residue argument needs.
double required_prime_count(std::uint64_t n, std::uint64_t max_value);

/// Smallest n for which count_primes(prime_interval(n, M, 50)) has been
/// checked to reach required_prime_count(n, M) (measured; n = 2, M = 8 falls short).
inline constexpr std::uint64_t kPrimeCountMinN = 3;

/// Dense GF(2) matrix, one 64-bit word per row; at most 64 rows and columns.
class F2Matrix {
 public:
  F2Matrix() = default;
  F2Matrix(unsigned rows, unsigned cols);

  unsigned rows() const noexcept { return rows_; }
  unsigned cols() const noexcept { return cols_; }
  std::uint64_t row(unsigned i) const { return data_.at(i); }
  void set_row(unsigned i, std::uint64_t bits);
  bool get(unsigned i, unsigned j) const { return (data_.at(i) >> j) & 1; }
  void set(unsigned i, unsigned j, bool v);

  unsigned rank() const;
  bool full_rank() const { return rank() == (rows_ < cols_ ? rows_ : cols_); }

  /// columns()[c] = bit mask of rows whose entry in column c is 1.
  std::vector<std::uint64_t> columns() const;

  static F2Matrix identity(unsigned k);

  friend bool operator==(const F2Matrix&, const F2Matrix&) = default;

 private:
  unsigned rows_ = 0;
  unsigned cols_ = 0;
  std::vector<std::uint64_t> data_;
};

/// Uniform full-row-rank rows x cols matrix by rejection. `rejections`, when
/// given, receives the number of discarded draws.
F2Matrix sample_full_rank(unsigned rows, unsigned cols, Rng& rng,
                          std::uint64_t* rejections = nullptr);

/// M v over GF(2); bit c of v is coordinate c. Throws if v has bits at or
/// above M.cols().
std::uint64_t f2_matvec(const F2Matrix& m, std::uint64_t v);

/// f2_matvec over many vectors (vectorized kernel).
void f2_matvec_batch(const F2Matrix& m, std::span<const std::uint64_t> in,
                     std::span<std::uint64_t> out);

}  // namespace sumindex
