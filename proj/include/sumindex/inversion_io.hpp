#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sumindex/bits.hpp"
#include "sumindex/inversion.hpp"

namespace sumindex {

inline constexpr std::uint16_t kInversionFormatVersion = 1;

/// Standalone "SIDX" layout: header, plan, seeds, then the packed sections.
std::vector<std::uint8_t> serialize_inversion(const InversionAdvice& advice);
InversionAdvice deserialize_inversion(std::span<const std::uint8_t> bytes);

/// Unpadded bit count of serialize_inversion(advice).
std::uint64_t inversion_bits(const InversionAdvice& advice);

/// Unpadded bit count of write_inversion_sections(advice).
std::uint64_t inversion_section_bits(const InversionAdvice& advice);

/// Sections only (tables, full inverse, heavy store). Plan, sizes and seeds
/// are supplied by the caller on read; used for per-sub-function blobs that
/// share one header.
void write_inversion_sections(BitWriter& out, const InversionAdvice& advice);
void read_inversion_sections(BitReader& in, InversionAdvice& advice);

}  // namespace sumindex
