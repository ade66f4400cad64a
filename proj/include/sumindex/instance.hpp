#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sumindex {

enum class InstanceKind : std::uint8_t { sum3 = 0, sumk = 1, xork = 2 };

const char* kind_name(InstanceKind kind) noexcept;
InstanceKind parse_kind(std::string_view name);

/// sum3: A (n values) and B (m values), all in [0, M].
/// sumk: A only, k >= 3, values in [0, M]; B is the (k-2)-fold sumset.
/// xork: A only, ell_bits-bit vectors, k >= 3; B is the (k-2)-fold XOR set.
struct Instance {
  InstanceKind kind = InstanceKind::sum3;
  std::vector<std::uint64_t> A;
  std::vector<std::uint64_t> B;
  unsigned k = 3;
  unsigned ell_bits = 0;
  std::uint64_t M = 0;

  std::uint64_t n() const noexcept { return A.size(); }
  /// |B|, or n^(k-2) for the derived kinds (saturating).
  std::uint64_t m() const noexcept;
  /// Number of indices in an answer tuple.
  unsigned arity() const noexcept { return kind == InstanceKind::sum3 ? 2 : k - 1; }
  /// One past the largest meaningful query value.
  std::uint64_t query_range() const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Throws std::invalid_argument on violated invariants.
void validate(const Instance& inst);

/// Header "kind n m k ell M", then one value per line: A then B for sum3,
/// hex bit vectors for xork.
std::string format_instance(const Instance& inst);
Instance parse_instance(std::string_view text);

void write_instance_file(const std::filesystem::path& path, const Instance& inst);
Instance read_instance_file(const std::filesystem::path& path);

/// FNV-1a over the canonical text form.
std::uint64_t instance_digest(const Instance& inst);

/// Value of an answer tuple: sum (or XOR) of the indexed elements; for sum3
/// the tuple is (i, j) over A and B.
std::uint64_t tuple_value(const Instance& inst, const std::vector<std::uint64_t>& tuple);

}  // namespace sumindex
