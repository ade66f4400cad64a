#pragma once

#include <cassert>
#include <cstdint>
#include <functional>
#include <utility>

namespace sumindex {

/// A finite function [domain_size) -> [range_size) with an evaluation meter.
/// Copies carry their own meter, so one copy per worker gives per-worker
/// counts that can be summed afterwards.
class FunctionSpec {
 public:
  using Evaluator = std::function<std::uint64_t(std::uint64_t)>;

  FunctionSpec(std::uint64_t domain_size, std::uint64_t range_size, Evaluator evaluator)
      : domain_size_(domain_size), range_size_(range_size), eval_(std::move(evaluator)) {}

  std::uint64_t operator()(std::uint64_t x) const {
    assert(x < domain_size_);
    ++evals_;
    const std::uint64_t y = eval_(x);
    assert(y < range_size_);
    return y;
  }

  std::uint64_t domain_size() const noexcept { return domain_size_; }
  std::uint64_t range_size() const noexcept { return range_size_; }
  std::uint64_t evaluations() const noexcept { return evals_; }
  void reset_evaluations() noexcept { evals_ = 0; }

 private:
  std::uint64_t domain_size_;
  std::uint64_t range_size_;
  Evaluator eval_;
  mutable std::uint64_t evals_ = 0;
};

}  // namespace sumindex
