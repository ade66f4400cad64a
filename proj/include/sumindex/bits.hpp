#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace sumindex {

/// Bits needed to store any value in [0, range).
constexpr unsigned field_width(std::uint64_t range) noexcept {
  return range <= 1 ? 0u : static_cast<unsigned>(std::bit_width(range - 1));
}

/// LSB-first bit packer. Byte-aligned fixed-width puts therefore come out
/// little-endian. Padding inserted by align() is tracked separately so the
/// accounted size can exclude it.
class BitWriter {
 public:
  void put(std::uint64_t value, unsigned width);
  void put_bool(bool b) { put(b ? 1 : 0, 1); }
  void put_u8(std::uint8_t v) { put(v, 8); }
  void put_u16(std::uint16_t v) { put(v, 16); }
  void put_u32(std::uint32_t v) { put(v, 32); }
  void put_u64(std::uint64_t v) { put(v, 64); }
  void put_f64(double v) { put_u64(std::bit_cast<std::uint64_t>(v)); }
  void put_magic(std::string_view magic);
  /// Length-prefixed (u32) byte string.
  void put_blob(std::span<const std::uint8_t> bytes);
  void align();

  std::uint64_t payload_bits() const noexcept { return bits_ - padding_; }
  std::uint64_t padding_bits() const noexcept { return padding_; }
  std::uint64_t total_bits() const noexcept { return bits_; }

  std::vector<std::uint8_t> finish() &&;
  const std::vector<std::uint8_t>& bytes() const noexcept { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
  std::uint64_t bits_ = 0;
  std::uint64_t padding_ = 0;
};

/// Reader mirroring BitWriter. Every read past the end throws FormatError.
class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : data_(bytes) {}

  std::uint64_t get(unsigned width);
  bool get_bool() { return get(1) != 0; }
  std::uint8_t get_u8() { return static_cast<std::uint8_t>(get(8)); }
  std::uint16_t get_u16() { return static_cast<std::uint16_t>(get(16)); }
  std::uint32_t get_u32() { return static_cast<std::uint32_t>(get(32)); }
  std::uint64_t get_u64() { return get(64); }
  double get_f64() { return std::bit_cast<double>(get_u64()); }
  void expect_magic(std::string_view magic);
  std::vector<std::uint8_t> get_blob();
  void align();

  std::uint64_t position_bits() const noexcept { return pos_; }
  std::uint64_t remaining_bits() const noexcept { return data_.size() * 8 - pos_; }
  bool at_end() const noexcept { return (pos_ + 7) / 8 >= data_.size(); }

 private:
  std::span<const std::uint8_t> data_;
  std::uint64_t pos_ = 0;
};

/// FNV-1a, 64-bit.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes,
                      std::uint64_t seed = 0xCBF29CE484222325ULL) noexcept;

}  // namespace sumindex
