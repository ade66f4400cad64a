#pragma once

#include <cstdint>

namespace sumindex {

__extension__ typedef unsigned __int128 u128;

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Maps a uniform 64-bit word into [bound] by multiply-shift.
constexpr std::uint64_t reduce(std::uint64_t x, std::uint64_t bound) noexcept {
  return static_cast<std::uint64_t>((static_cast<u128>(x) * bound) >> 64);
}

/// Output number `index` of the splitmix64 stream seeded with `key`.
constexpr std::uint64_t splitmix_at(std::uint64_t key, std::uint64_t index) noexcept {
  return mix64(key + (index + 1) * kGolden);
}

/// Derives an independent key for a labelled sub-stream.
constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t label) noexcept {
  return mix64(key ^ mix64(label + kGolden));
}

/// Keyed mixing map h: [range] -> [domain] used to vary the iterated function
/// per Hellman table. Same (seed, table_index, value) always yields the same
/// output.
class MixKey {
 public:
  MixKey() = default;
  MixKey(std::uint64_t seed, std::uint64_t table_index) noexcept
      : seed_(seed), table_index_(table_index),
        key_(derive_key(seed, 0x7AB1E000ULL + table_index)) {}

  std::uint64_t operator()(std::uint64_t value, std::uint64_t domain) const noexcept {
    return reduce(mix64(value ^ key_), domain);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t table_index() const noexcept { return table_index_; }

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t table_index_ = 0;
  std::uint64_t key_ = 0;
};

}  // namespace sumindex
