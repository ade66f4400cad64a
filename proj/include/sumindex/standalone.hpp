#pragma once

// Function inversion on its own: seeded random functions and weak copies of
// an inverter, ready for amplification.

#include <cstdint>

#include "sumindex/framework.hpp"
#include "sumindex/inversion.hpp"

namespace sumindex {

/// f(x) = mix of (seed, x) reduced to [range]; a fixed random function.
FunctionSpec random_function(std::uint64_t seed, std::uint64_t domain, std::uint64_t range);

class InversionCopy final : public WeakInverter {
 public:
  InversionCopy(FunctionSpec f, InversionAdvice advice, std::uint64_t preprocess_evals);

  std::optional<std::uint64_t> query(std::uint64_t y, QueryStats* stats) const override;
  std::uint64_t advice_bits() const override { return advice_.bit_size; }
  std::uint64_t preprocess_evals() const override { return preprocess_evals_; }
  const InversionAdvice& advice() const noexcept { return advice_; }

 private:
  FunctionSpec f_;
  InversionAdvice advice_;
  std::uint64_t preprocess_evals_;
};

/// Copy k uses shared seed derive_key(seed, 2k) and start seed derive_key(seed, 2k+1).
WeakBuilder inversion_builder(FunctionSpec f, ParamPlan plan, std::uint64_t seed);

}  // namespace sumindex
