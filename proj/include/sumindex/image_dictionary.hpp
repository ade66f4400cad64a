#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sumindex/mixing.hpp"

namespace sumindex {

/// Open-addressing map image -> preimage, first insertion wins. Used as the
/// blocked-image set during chain walks, so lookups must stay cheap.
class ImageDictionary {
 public:
  ImageDictionary() { rehash(8); }
  explicit ImageDictionary(std::size_t expected) { rehash(capacity_for(expected)); }

  bool insert(std::uint64_t image, std::uint64_t preimage) {
    if (2 * (size_ + 1) > keys_.size()) rehash(2 * keys_.size());
    std::size_t slot = mix64(image) & mask_;
    while (keys_[slot] != kEmpty) {
      if (keys_[slot] == image) return false;
      slot = (slot + 1) & mask_;
    }
    keys_[slot] = image;
    values_[slot] = preimage;
    ++size_;
    return true;
  }

  std::optional<std::uint64_t> find(std::uint64_t image) const noexcept {
    std::size_t slot = mix64(image) & mask_;
    while (keys_[slot] != kEmpty) {
      if (keys_[slot] == image) return values_[slot];
      slot = (slot + 1) & mask_;
    }
    return std::nullopt;
  }

  bool contains(std::uint64_t image) const noexcept { return find(image).has_value(); }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  void clear(std::size_t expected = 0) {
    size_ = 0;
    rehash(capacity_for(expected));
  }

 private:
  static constexpr std::uint64_t kEmpty = ~0ULL;

  static std::size_t capacity_for(std::size_t expected) {
    std::size_t cap = 8;
    while (cap < 2 * expected + 2) cap *= 2;
    return cap;
  }

  void rehash(std::size_t capacity) {
    std::vector<std::uint64_t> old_keys = std::move(keys_);
    std::vector<std::uint64_t> old_values = std::move(values_);
    keys_.assign(capacity, kEmpty);
    values_.assign(capacity, 0);
    mask_ = capacity - 1;
    size_ = 0;
    for (std::size_t i = 0; i < old_keys.size(); ++i) {
      if (old_keys[i] != kEmpty) insert(old_keys[i], old_values[i]);
    }
  }

  std::vector<std::uint64_t> keys_;
  std::vector<std::uint64_t> values_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace sumindex
