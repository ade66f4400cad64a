#include "sumindex/number_theory.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sumindex/errors.hpp"
#include "sumindex/kernels.hpp"

namespace sumindex {

PrimeInterval prime_interval(std::uint64_t n, std::uint64_t M, double c) {
  if (M < 8) throw std::invalid_argument("prime_interval needs M >= 8");
  if (n == 0) throw std::invalid_argument("prime_interval needs a positive count target");
  if (!(c > 0) || !std::isfinite(c)) throw std::invalid_argument("prime constant must be positive");
  const long double two_m = 2.0L * static_cast<long double>(M);
  const long double v = static_cast<long double>(c) * static_cast<long double>(n) *
                        std::log(two_m) * std::log(std::log(two_m));
  const long double lo = std::ceil(v);
  if (lo >= 4.0e18L) throw std::invalid_argument("prime interval overflows 64 bits");
  PrimeInterval out;
  out.lo = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(lo));
  out.hi = 2 * out.lo;
  out.count_target = n;
  out.max_value = M;
  out.c = c;
  return out;
}

PrimeInterval make_interval(std::uint64_t lo, std::uint64_t hi) {
  if (lo > hi) throw std::invalid_argument("empty interval");
  PrimeInterval out;
  out.lo = lo;
  out.hi = hi;
  return out;
}

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) noexcept {
  std::uint64_t r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  // the first twelve primes are a complete witness set below 3.3e24
  static constexpr std::uint64_t kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kWitnesses) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kWitnesses) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t sample_prime(const PrimeInterval& interval, Rng& rng, std::uint64_t max_attempts) {
  if (interval.lo > interval.hi) throw std::invalid_argument("empty interval");
  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    const std::uint64_t v = uniform_between(rng, interval.lo, interval.hi);
    if (is_prime(v)) return v;
  }
  throw std::runtime_error("no prime found in [" + std::to_string(interval.lo) + ", " +
                           std::to_string(interval.hi) + "] after " +
                           std::to_string(max_attempts) + " draws");
}

std::uint64_t count_primes(const PrimeInterval& interval, std::uint64_t sieve_max) {
  const std::uint64_t lo = std::max<std::uint64_t>(interval.lo, 2);
  const std::uint64_t hi = interval.hi;
  if (hi > sieve_max)
    throw BudgetExceeded("sieve limit " + std::to_string(sieve_max) + " below " +
                         std::to_string(hi));
  if (lo > hi) return 0;

  const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(hi))) + 1;
  std::vector<bool> small(root + 1, true);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += i) small[j] = false;
  }

  // bit k of a segment stands for seg_lo + k
  constexpr std::uint64_t kSegment = 1ULL << 18;
  std::vector<std::uint64_t> bits(kSegment / 64);
  std::uint64_t total = 0;
  for (std::uint64_t seg_lo = lo; seg_lo <= hi;) {
    const std::uint64_t seg_hi = std::min(hi, seg_lo + kSegment - 1);
    const std::uint64_t len = seg_hi - seg_lo + 1;
    const std::size_t words = (len + 63) / 64;
    std::fill(bits.begin(), bits.begin() + words, ~0ULL);
    if (len % 64) bits[words - 1] = (1ULL << (len % 64)) - 1;
    for (std::uint64_t p : base) {
      if (p * p > seg_hi) break;
      std::uint64_t start = std::max(p * p, (seg_lo + p - 1) / p * p);
      for (std::uint64_t v = start; v <= seg_hi; v += p) {
        const std::uint64_t k = v - seg_lo;
        bits[k / 64] &= ~(1ULL << (k % 64));
      }
    }
    total += kernels::popcount(std::span<const std::uint64_t>(bits.data(), words));
    if (seg_hi == hi) break;
    seg_lo = seg_hi + 1;
  }
  return total;
}

double required_prime_count(std::uint64_t n, std::uint64_t M) {
  if (n < 2) return std::numeric_limits<double>::infinity();
  return 6.0 * static_cast<double>(n) * std::log(2.0 * static_cast<double>(M)) /
         std::log(static_cast<double>(n));
}

F2Matrix::F2Matrix(unsigned rows, unsigned cols) : rows_(rows), cols_(cols), data_(rows, 0) {
  if (rows > 64 || cols > 64) throw std::invalid_argument("F2Matrix supports at most 64x64");
}

void F2Matrix::set_row(unsigned i, std::uint64_t bits) {
  if (cols_ < 64 && (bits >> cols_) != 0) throw std::invalid_argument("row wider than matrix");
  data_.at(i) = bits;
}

void F2Matrix::set(unsigned i, unsigned j, bool v) {
  if (j >= cols_) throw std::out_of_range("column index");
  std::uint64_t& w = data_.at(i);
  w = v ? (w | (1ULL << j)) : (w & ~(1ULL << j));
}

unsigned F2Matrix::rank() const {
  std::vector<std::uint64_t> m = data_;
  unsigned rank = 0;
  for (unsigned col = 0; col < cols_ && rank < rows_; ++col) {
    const std::uint64_t bit = 1ULL << col;
    unsigned pivot = rank;
    while (pivot < rows_ && !(m[pivot] & bit)) ++pivot;
    if (pivot == rows_) continue;
    std::swap(m[pivot], m[rank]);
    for (unsigned i = 0; i < rows_; ++i) {
      if (i != rank && (m[i] & bit)) m[i] ^= m[rank];
    }
    ++rank;
  }
  return rank;
}

std::vector<std::uint64_t> F2Matrix::columns() const {
  if (rows_ > 64) throw std::invalid_argument("column masks need at most 64 rows");
  std::vector<std::uint64_t> out(cols_, 0);
  for (unsigned i = 0; i < rows_; ++i)
    for (unsigned j = 0; j < cols_; ++j)
      if ((data_[i] >> j) & 1) out[j] |= 1ULL << i;
  return out;
}

F2Matrix F2Matrix::identity(unsigned k) {
  F2Matrix m(k, k);
  for (unsigned i = 0; i < k; ++i) m.data_[i] = 1ULL << i;
  return m;
}

F2Matrix sample_full_rank(unsigned rows, unsigned cols, Rng& rng, std::uint64_t* rejections) {
  if (rows > cols) throw std::invalid_argument("full row rank needs rows <= cols");
  const std::uint64_t mask = cols == 64 ? ~0ULL : (1ULL << cols) - 1;
  F2Matrix m(rows, cols);
  std::uint64_t rejected = 0;
  for (;;) {
    for (unsigned i = 0; i < rows; ++i) m.set_row(i, rng() & mask);
    if (m.rank() == rows) break;
    ++rejected;
  }
  if (rejections) *rejections = rejected;
  return m;
}

std::uint64_t f2_matvec(const F2Matrix& m, std::uint64_t v) {
  if (m.cols() < 64 && (v >> m.cols()) != 0) throw std::invalid_argument("vector length mismatch");
  std::uint64_t out = 0;
  for (unsigned i = 0; i < m.rows(); ++i)
    out |= static_cast<std::uint64_t>(std::popcount(m.row(i) & v) & 1) << i;
  return out;
}

void f2_matvec_batch(const F2Matrix& m, std::span<const std::uint64_t> in,
                     std::span<std::uint64_t> out) {
  if (in.size() != out.size()) throw std::invalid_argument("batch length mismatch");
  const std::uint64_t mask = m.cols() == 64 ? ~0ULL : (1ULL << m.cols()) - 1;
  for (std::uint64_t v : in)
    if (v & ~mask) throw std::invalid_argument("vector length mismatch");
  const auto cols = m.columns();
  kernels::f2_apply(cols, in, out);
}

}  // namespace sumindex
