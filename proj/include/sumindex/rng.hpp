#pragma once

#include <cstdint>

#include "sumindex/mixing.hpp"
#include <random>

namespace sumindex {

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) (Lemire's nearly divisionless method).
/// Written out because std::uniform_int_distribution output differs between
/// standard libraries, and seeded runs must reproduce everywhere.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  std::uint64_t x = rng();
  u128 m = static_cast<u128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = rng();
      m = static_cast<u128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Uniform integer in [lo, hi].
inline std::uint64_t uniform_between(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  if (hi - lo == ~0ULL) return rng();
  return lo + uniform_below(rng, hi - lo + 1);
}

}  // namespace sumindex
