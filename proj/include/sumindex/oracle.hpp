#pragma once

// Ground truth by exhaustive search, plus seeded instance generators.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "sumindex/instance.hpp"

namespace sumindex {

struct OracleAnswer {
  bool member = false;
  std::optional<std::vector<std::uint64_t>> witness;
};

inline constexpr std::uint64_t kOracleBudget = 1ULL << 26;

/// Number of answer tuples the exhaustive scan covers: n*m for sum3,
/// n^(k-1) otherwise (saturating).
std::uint64_t oracle_tuple_count(const Instance& inst);

/// Lexicographically least answer tuple for y. The last two coordinates are
/// resolved through a value index (meet in the middle), the rest by
/// enumeration. Throws BudgetExceeded past kOracleBudget tuples.
OracleAnswer oracle_query(const Instance& inst, std::uint64_t y);

/// Precomputed least witnesses for every attainable value; answers many
/// queries against one instance. Same budget as oracle_query.
class OracleTable {
 public:
  explicit OracleTable(const Instance& inst);

  OracleAnswer query(std::uint64_t y) const;
  /// Attainable values in increasing order.
  const std::vector<std::uint64_t>& values() const noexcept { return values_; }

 private:
  std::vector<std::uint64_t> decode(std::uint64_t rank) const;

  Instance inst_;
  std::uint64_t base_ = 0;  // radix of the last coordinate
  std::vector<std::uint64_t> values_;
  std::vector<std::uint64_t> ranks_;  // lexicographic rank of the least tuple
};

enum class Profile : std::uint8_t { uniform, clustered, duplicates, arithmetic };

const char* profile_name(Profile p) noexcept;
Profile parse_profile(std::string_view name);
inline constexpr Profile kAllProfiles[] = {Profile::uniform, Profile::clustered,
                                           Profile::duplicates, Profile::arithmetic};

struct GenParams {
  InstanceKind kind = InstanceKind::sum3;
  std::uint64_t n = 64;
  std::uint64_t m = 0;  // sum3 only; 0 means m = n
  unsigned k = 3;
  unsigned ell_bits = 0;  // xork only
  std::uint64_t M = 1ULL << 16;
};

/// Deterministic per (profile, seed, params).
///  uniform:     values uniform in [0, M] (ell-bit vectors for xork)
///  clustered:   few centres with narrow spread, so many sums collide
///  duplicates:  at least n/4 entries repeat an earlier value
///  arithmetic:  s + i*d with a shared step d (B uses the same d)
Instance gen_instance(Profile profile, std::uint64_t seed, const GenParams& params);

}  // namespace sumindex
