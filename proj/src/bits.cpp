#include "sumindex/bits.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "sumindex/errors.hpp"

namespace sumindex {

void BitWriter::put(std::uint64_t value, unsigned width) {
  if (width > 64) throw std::invalid_argument("BitWriter::put: width > 64");
  if (width < 64 && (value >> width) != 0) {
    throw std::invalid_argument("BitWriter::put: value " + std::to_string(value) +
                                " does not fit in " + std::to_string(width) + " bits");
  }
  while (width > 0) {
    const unsigned offset = static_cast<unsigned>(bits_ % 8);
    if (offset == 0) buf_.push_back(0);
    const unsigned take = std::min(width, 8u - offset);
    const auto chunk = static_cast<std::uint8_t>(value & ((1u << take) - 1));
    buf_.back() = static_cast<std::uint8_t>(buf_.back() | (chunk << offset));
    value = take == 64 ? 0 : value >> take;
    width -= take;
    bits_ += take;
  }
}

void BitWriter::put_magic(std::string_view magic) {
  align();
  for (char c : magic) put_u8(static_cast<std::uint8_t>(c));
}

void BitWriter::put_blob(std::span<const std::uint8_t> bytes) {
  align();
  put_u32(static_cast<std::uint32_t>(bytes.size()));
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
  bits_ += 8 * static_cast<std::uint64_t>(bytes.size());
}

void BitWriter::align() {
  const auto rem = bits_ % 8;
  if (rem != 0) {
    padding_ += 8 - rem;
    bits_ += 8 - rem;
  }
}

std::vector<std::uint8_t> BitWriter::finish() && {
  align();
  return std::move(buf_);
}

std::uint64_t BitReader::get(unsigned width) {
  if (width > 64) throw std::invalid_argument("BitReader::get: width > 64");
  if (pos_ + width > 8 * static_cast<std::uint64_t>(data_.size())) {
    throw FormatError("truncated input: need " + std::to_string(width) + " bits at bit " +
                      std::to_string(pos_));
  }
  std::uint64_t value = 0;
  unsigned filled = 0;
  while (filled < width) {
    const unsigned offset = static_cast<unsigned>(pos_ % 8);
    const unsigned take = std::min(width - filled, 8u - offset);
    const std::uint64_t chunk = (data_[pos_ / 8] >> offset) & ((1u << take) - 1);
    value |= chunk << filled;
    filled += take;
    pos_ += take;
  }
  return value;
}

void BitReader::expect_magic(std::string_view magic) {
  align();
  for (char c : magic) {
    if (get_u8() != static_cast<std::uint8_t>(c)) {
      throw FormatError("bad magic, expected \"" + std::string(magic) + "\"");
    }
  }
}

std::vector<std::uint8_t> BitReader::get_blob() {
  align();
  const std::uint32_t len = get_u32();
  const std::uint64_t start = pos_ / 8;
  if (start + len > data_.size()) throw FormatError("truncated blob");
  std::vector<std::uint8_t> out(data_.begin() + static_cast<std::ptrdiff_t>(start),
                                data_.begin() + static_cast<std::ptrdiff_t>(start + len));
  pos_ += 8 * static_cast<std::uint64_t>(len);
  return out;
}

void BitReader::align() { pos_ = (pos_ + 7) / 8 * 8; }

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t seed) noexcept {
  std::uint64_t h = seed;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace sumindex
