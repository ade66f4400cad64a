#include "sumindex/kernels.hpp"

#include <atomic>
#include <bit>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "sumindex/mixing.hpp"

namespace sumindex::kernels {

namespace scalar {

void splitmix_reduce(std::uint64_t key, std::uint64_t first, std::uint64_t bound,
                     std::span<std::uint64_t> out) {
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = reduce(splitmix_at(key, first + k), bound);
  }
}

void f2_apply(std::span<const std::uint64_t> columns,
              std::span<const std::uint64_t> in, std::span<std::uint64_t> out) {
  for (std::size_t k = 0; k < in.size(); ++k) {
    std::uint64_t acc = 0;
    std::uint64_t v = in[k];
    for (std::size_t c = 0; c < columns.size(); ++c) {
      acc ^= (0 - ((v >> c) & 1)) & columns[c];
    }
    out[k] = acc;
  }
}

std::uint64_t popcount(std::span<const std::uint64_t> words) {
  std::uint64_t total = 0;
  for (std::uint64_t w : words) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

}  // namespace scalar

namespace {

bool cpu_has_avx2() noexcept {
#if defined(SUMINDEX_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detect() noexcept {
  if (const char* forced = std::getenv("SUMINDEX_ISA")) {
    if (std::string_view(forced) == "scalar") return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& active() noexcept {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

bool isa_available(Isa isa) noexcept {
  return isa == Isa::scalar || (isa == Isa::avx2 && cpu_has_avx2());
}

void set_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("ISA not available on this CPU: " + std::string(isa_name(isa)));
  }
  active().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

#if defined(SUMINDEX_HAVE_AVX2_TU)
#define SUMINDEX_DISPATCH(fn, ...) \
  (active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define SUMINDEX_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void splitmix_reduce(std::uint64_t key, std::uint64_t first, std::uint64_t bound,
                     std::span<std::uint64_t> out) {
  SUMINDEX_DISPATCH(splitmix_reduce, key, first, bound, out);
}

void f2_apply(std::span<const std::uint64_t> columns,
              std::span<const std::uint64_t> in, std::span<std::uint64_t> out) {
  if (columns.size() > 64) throw std::invalid_argument("f2_apply: more than 64 columns");
  if (in.size() != out.size()) throw std::invalid_argument("f2_apply: length mismatch");
  SUMINDEX_DISPATCH(f2_apply, columns, in, out);
}

std::uint64_t popcount(std::span<const std::uint64_t> words) {
  return SUMINDEX_DISPATCH(popcount, words);
}

#undef SUMINDEX_DISPATCH

}  // namespace sumindex::kernels
