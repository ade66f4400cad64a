#pragma once

#include <memory>

#include "sumindex/framework.hpp"
#include "sumindex/kxor_indexing.hpp"
#include "sumindex/sum_indexing.hpp"

namespace sumindex {

template <class Decomp>
class FrameworkCopy final : public IndexCopy {
 public:
  FrameworkCopy(Decomp decomp, FrameworkAdvice advice)
      : decomp_(std::move(decomp)), advice_(std::move(advice)) {}

  std::optional<std::uint64_t> query(std::uint64_t y, QueryStats* stats) const override {
    return query_framework(advice_, decomp_, y, stats);
  }
  std::uint64_t advice_bits() const override { return advice_.total_bits; }
  std::uint64_t preprocess_evals() const override { return advice_.preprocess_evals; }
  std::vector<std::uint8_t> serialize() const override { return serialize_framework(advice_); }

  const Decomp& decomposition() const noexcept { return decomp_; }
  const FrameworkAdvice& advice() const noexcept { return advice_; }

 private:
  Decomp decomp_;
  FrameworkAdvice advice_;
};

struct Index::State {
  Instance inst;
  IndexConfig config;
  std::uint64_t digest = 0;
  bool trivial = false;
  std::uint64_t ell = 1;
  std::uint64_t N = 0;
  std::uint64_t N_prime = 0;
  std::uint64_t m = 0;
  std::shared_ptr<const SumInput> sum_input;   // sum3, sumk
  std::shared_ptr<const XorInput> xor_input;   // xork
  std::shared_ptr<const WitnessedSumset> witnesses;  // sumk, xork
  WeakBuilder builder;
  std::unique_ptr<AmplifiedAdvice> amplified;
};

/// Rebuilds a copy from its serialized form (framework advice or table).
std::unique_ptr<IndexCopy> load_copy(const Index::State& state, std::span<const std::uint8_t> bytes);

}  // namespace sumindex
