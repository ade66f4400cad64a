#pragma once

// Data-parallel inner loops with a scalar reference and an AVX2 variant.
// The dispatched entry points pick the widest ISA the running CPU supports
// and produce output bit-identical to the scalar reference.

#include <cstdint>
#include <span>
#include <string_view>

namespace sumindex::kernels {

enum class Isa : std::uint8_t { scalar, avx2 };

/// out[k] = bounded(splitmix64 output number first+k of the stream keyed by
/// `key`), where bounded(x) = floor(x * bound / 2^64). Requires bound >= 1.
void splitmix_reduce(std::uint64_t key, std::uint64_t first, std::uint64_t bound,
                     std::span<std::uint64_t> out);

/// GF(2) matrix times many vectors. columns[c] holds the rows (as a bit mask,
/// at most 64 rows) that input bit c contributes to; at most 64 columns.
void f2_apply(std::span<const std::uint64_t> columns,
              std::span<const std::uint64_t> in, std::span<std::uint64_t> out);

std::uint64_t popcount(std::span<const std::uint64_t> words);

Isa active_isa() noexcept;
bool isa_available(Isa isa) noexcept;
/// Pins dispatch to `isa`; throws std::invalid_argument if the CPU lacks it.
void set_isa(Isa isa);
std::string_view isa_name(Isa isa) noexcept;

namespace scalar {
void splitmix_reduce(std::uint64_t key, std::uint64_t first, std::uint64_t bound,
                     std::span<std::uint64_t> out);
void f2_apply(std::span<const std::uint64_t> columns,
              std::span<const std::uint64_t> in, std::span<std::uint64_t> out);
std::uint64_t popcount(std::span<const std::uint64_t> words);
}  // namespace scalar

namespace avx2 {
// Only callable when isa_available(Isa::avx2).
void splitmix_reduce(std::uint64_t key, std::uint64_t first, std::uint64_t bound,
                     std::span<std::uint64_t> out);
void f2_apply(std::span<const std::uint64_t> columns,
              std::span<const std::uint64_t> in, std::span<std::uint64_t> out);
std::uint64_t popcount(std::span<const std::uint64_t> words);
}  // namespace avx2

}  // namespace sumindex::kernels
