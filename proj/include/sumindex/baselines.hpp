#pragma once

// The two textbook endpoints of the tradeoff for 3SUM-Indexing over (A, B):
// keep A and B sorted (S ~ n words, T ~ n log m) or keep the sorted sumset
// with one witness per value (S ~ nm words, T ~ log nm).

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sumindex/framework.hpp"
#include "sumindex/sum_indexing.hpp"

namespace sumindex {

class SortedArrayBaseline {
 public:
  SortedArrayBaseline(std::span<const std::uint64_t> A, std::span<const std::uint64_t> B,
                      std::uint64_t M);

  /// Least (i, j) in A-order then B-order among pairs found; probes = words read.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> query(std::uint64_t y,
                                                               QueryStats* stats = nullptr) const;
  std::uint64_t advice_bits() const noexcept { return bits_; }

 private:
  std::vector<std::uint64_t> A_;
  std::vector<ValueIndex> sorted_B_;
  std::uint64_t bits_ = 0;
};

class SortedSumsetBaseline {
 public:
  SortedSumsetBaseline(std::span<const std::uint64_t> A, std::span<const std::uint64_t> B,
                       std::uint64_t M);

  std::optional<std::pair<std::uint64_t, std::uint64_t>> query(std::uint64_t y,
                                                               QueryStats* stats = nullptr) const;
  std::uint64_t advice_bits() const noexcept { return bits_; }
  std::uint64_t size() const noexcept { return values_.size(); }
  /// Distinct sums in increasing order.
  const std::vector<std::uint64_t>& values() const noexcept { return values_; }

 private:
  std::vector<std::uint64_t> values_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> witness_;  // lexicographically least
  std::uint64_t bits_ = 0;
};

/// Single-array forms over A + A.
inline SortedArrayBaseline baseline_sorted_array(std::span<const std::uint64_t> A, std::uint64_t M) {
  return SortedArrayBaseline(A, A, M);
}
inline SortedSumsetBaseline baseline_sorted_sumset(std::span<const std::uint64_t> A, std::uint64_t M) {
  return SortedSumsetBaseline(A, A, M);
}

}  // namespace sumindex
