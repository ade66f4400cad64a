// Compiled with -mavx2; only reached through runtime dispatch.

#include <immintrin.h>

#include "sumindex/kernels.hpp"
#include "sumindex/mixing.hpp"

namespace sumindex::kernels::avx2 {

namespace {

// Low 64 bits of a 64x64 product per lane.
inline __m256i mul_lo(__m256i a, __m256i b) {
  const __m256i lo = _mm256_mul_epu32(a, b);
  const __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(_mm256_srli_epi64(a, 32), b),
                                         _mm256_mul_epu32(a, _mm256_srli_epi64(b, 32)));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

// High 64 bits of a 64x64 product per lane.
inline __m256i mul_hi(__m256i a, __m256i b) {
  const __m256i mask32 = _mm256_set1_epi64x(0xFFFFFFFFLL);
  const __m256i a1 = _mm256_srli_epi64(a, 32);
  const __m256i b1 = _mm256_srli_epi64(b, 32);
  const __m256i p00 = _mm256_mul_epu32(a, b);
  const __m256i p01 = _mm256_mul_epu32(a, b1);
  const __m256i p10 = _mm256_mul_epu32(a1, b);
  const __m256i p11 = _mm256_mul_epu32(a1, b1);
  const __m256i mid = _mm256_add_epi64(
      _mm256_add_epi64(_mm256_srli_epi64(p00, 32), _mm256_and_si256(p01, mask32)),
      _mm256_and_si256(p10, mask32));
  __m256i hi = _mm256_add_epi64(p11, _mm256_srli_epi64(p01, 32));
  hi = _mm256_add_epi64(hi, _mm256_srli_epi64(p10, 32));
  return _mm256_add_epi64(hi, _mm256_srli_epi64(mid, 32));
}

inline __m256i mix(__m256i z) {
  z = mul_lo(_mm256_xor_si256(z, _mm256_srli_epi64(z, 30)),
             _mm256_set1_epi64x(static_cast<long long>(0xBF58476D1CE4E5B9ULL)));
  z = mul_lo(_mm256_xor_si256(z, _mm256_srli_epi64(z, 27)),
             _mm256_set1_epi64x(static_cast<long long>(0x94D049BB133111EBULL)));
  return _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
}

}  // namespace

void splitmix_reduce(std::uint64_t key, std::uint64_t first, std::uint64_t bound,
                     std::span<std::uint64_t> out) {
  const std::size_t n = out.size();
  std::size_t k = 0;
  const __m256i vbound = _mm256_set1_epi64x(static_cast<long long>(bound));
  const __m256i step = _mm256_set1_epi64x(static_cast<long long>(4 * kGolden));
  __m256i state = _mm256_setr_epi64x(
      static_cast<long long>(key + (first + 1) * kGolden),
      static_cast<long long>(key + (first + 2) * kGolden),
      static_cast<long long>(key + (first + 3) * kGolden),
      static_cast<long long>(key + (first + 4) * kGolden));
  for (; k + 4 <= n; k += 4) {
    const __m256i r = mul_hi(mix(state), vbound);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + k), r);
    state = _mm256_add_epi64(state, step);
  }
  for (; k < n; ++k) out[k] = reduce(splitmix_at(key, first + k), bound);
}

void f2_apply(std::span<const std::uint64_t> columns,
              std::span<const std::uint64_t> in, std::span<std::uint64_t> out) {
  const std::size_t n = in.size();
  const std::size_t ncols = columns.size();
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i zero = _mm256_setzero_si256();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in.data() + k));
    __m256i acc = zero;
    for (std::size_t c = 0; c < ncols; ++c) {
      const __m256i bit = _mm256_and_si256(v, one);
      const __m256i mask = _mm256_sub_epi64(zero, bit);
      acc = _mm256_xor_si256(
          acc, _mm256_and_si256(mask, _mm256_set1_epi64x(static_cast<long long>(columns[c]))));
      v = _mm256_srli_epi64(v, 1);
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + k), acc);
  }
  if (k < n) scalar::f2_apply(columns, in.subspan(k), out.subspan(k));
}

std::uint64_t popcount(std::span<const std::uint64_t> words) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0F);
  __m256i acc = _mm256_setzero_si256();
  const std::size_t n = words.size();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words.data() + k));
    const __m256i lo = _mm256_and_si256(v, low_mask);
    const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    const __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo),
                                        _mm256_shuffle_epi8(lookup, hi));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(cnt, _mm256_setzero_si256()));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  if (k < n) total += scalar::popcount(words.subspan(k));
  return total;
}

}  // namespace sumindex::kernels::avx2
