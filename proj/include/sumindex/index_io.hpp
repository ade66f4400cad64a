#pragma once

// Advice file "SIAD": instance digest, build config, witness section, then
// one length-prefixed blob per amplification copy.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sumindex/sum_indexing.hpp"

namespace sumindex {

inline constexpr std::uint16_t kAdviceFormatVersion = 1;

/// Builds every copy (one resident at a time) and writes the file.
/// Returns the number of bytes written.
std::uint64_t write_advice_file(const std::filesystem::path& path, const Index& index);

/// Throws DigestMismatch when the file was built for another instance and
/// FormatError on malformed content. Copies are decoded on first use.
Index read_advice_file(const std::filesystem::path& path, const Instance& inst);

/// In-memory forms of the same layout.
std::vector<std::uint8_t> serialize_index(const Index& index);
Index deserialize_index(std::vector<std::uint8_t> bytes, const Instance& inst);

}  // namespace sumindex
