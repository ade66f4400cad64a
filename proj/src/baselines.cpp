#include "sumindex/baselines.hpp"

#include <algorithm>
#include <stdexcept>

#include "sumindex/bits.hpp"

namespace sumindex {

SortedArrayBaseline::SortedArrayBaseline(std::span<const std::uint64_t> A,
                                         std::span<const std::uint64_t> B, std::uint64_t M)
    : A_(A.begin(), A.end()) {
  if (B.size() > 0xFFFFFFFFULL) throw std::invalid_argument("B too large");
  sorted_B_.resize(B.size());
  for (std::size_t j = 0; j < B.size(); ++j) sorted_B_[j] = {B[j], static_cast<std::uint32_t>(j)};
  std::sort(sorted_B_.begin(), sorted_B_.end(), [](const ValueIndex& a, const ValueIndex& b) {
    return a.value != b.value ? a.value < b.value : a.index < b.index;
  });
  const unsigned wv = field_width(M + 1);
  bits_ = A.size() * wv + B.size() * (wv + field_width(B.size()));
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> SortedArrayBaseline::query(
    std::uint64_t y, QueryStats* stats) const {
  std::uint64_t probes = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::size_t i = 0; i < A_.size() && !out; ++i) {
    ++probes;
    if (A_[i] > y) continue;
    const std::uint64_t want = y - A_[i];
    std::size_t lo = 0, hi = sorted_B_.size();
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      ++probes;
      if (sorted_B_[mid].value < want) lo = mid + 1;
      else hi = mid;
    }
    if (lo < sorted_B_.size() && sorted_B_[lo].value == want) {
      ++probes;
      out = std::make_pair(i, sorted_B_[lo].index);
    }
  }
  if (stats) stats->probes += probes;
  return out;
}

SortedSumsetBaseline::SortedSumsetBaseline(std::span<const std::uint64_t> A,
                                           std::span<const std::uint64_t> B, std::uint64_t M) {
  if (A.size() > 0xFFFFFFFFULL || B.size() > 0xFFFFFFFFULL) throw std::invalid_argument("too large");
  struct Entry {
    std::uint64_t value;
    std::uint32_t i, j;
  };
  std::vector<Entry> all;
  all.reserve(A.size() * B.size());
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < B.size(); ++j)
      all.push_back({A[i] + B[j], static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
  std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (const Entry& e : all) {
    if (!values_.empty() && values_.back() == e.value) continue;
    values_.push_back(e.value);
    witness_.emplace_back(e.i, e.j);
  }
  bits_ = values_.size() * (field_width(2 * M + 1) + field_width(A.size()) + field_width(B.size()));
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> SortedSumsetBaseline::query(
    std::uint64_t y, QueryStats* stats) const {
  std::size_t lo = 0, hi = values_.size();
  std::uint64_t probes = 0;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    ++probes;
    if (values_[mid] < y) lo = mid + 1;
    else hi = mid;
  }
  std::optional<std::pair<std::uint64_t, std::uint64_t>> out;
  if (lo < values_.size() && values_[lo] == y) {
    ++probes;
    out = std::make_pair(witness_[lo].first, witness_[lo].second);
  }
  if (stats) stats->probes += probes;
  return out;
}

}  // namespace sumindex
