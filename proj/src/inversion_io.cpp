#include "sumindex/inversion_io.hpp"

#include "sumindex/errors.hpp"

namespace sumindex {

namespace {

constexpr std::uint64_t kSeedCount = 3;
constexpr std::uint64_t kHeaderBits = 32 + 16 + 8 + 64 + 64;
constexpr std::uint64_t kPlanBits = 4 * 64 + 5 * 64;
constexpr std::uint64_t kSeedBits = 8 + kSeedCount * 64;

void write_pairs(BitWriter& out, const std::vector<ImagePair>& pairs, std::uint64_t L,
                 std::uint64_t L_prime) {
  const unsigned wi = field_width(L_prime), wx = field_width(L);
  out.put(pairs.size(), field_width(L + 1));
  for (const ImagePair& p : pairs) {
    out.put(p.image, wi);
    out.put(p.preimage, wx);
  }
  out.align();
}

std::vector<ImagePair> read_pairs(BitReader& in, std::uint64_t L, std::uint64_t L_prime) {
  const unsigned wi = field_width(L_prime), wx = field_width(L);
  const std::uint64_t count = in.get(field_width(L + 1));
  if (count > L || count * (wi + wx) > in.remaining_bits())
    throw FormatError("image section longer than domain");
  std::vector<ImagePair> pairs(count);
  for (ImagePair& p : pairs) {
    p.image = static_cast<std::uint32_t>(in.get(wi));
    p.preimage = static_cast<std::uint32_t>(in.get(wx));
  }
  in.align();
  return pairs;
}

std::uint64_t section_bits(const InversionAdvice& a) {
  const std::uint64_t pair_bits = field_width(a.range_size) + field_width(a.domain_size);
  const std::uint64_t count_bits = field_width(a.domain_size + 1);
  const std::uint64_t chain_bits = a.plan.r * a.plan.s * 2ULL * field_width(a.domain_size);
  switch (a.plan.mode) {
    case InversionMode::full_inverse: return count_bits + a.full_inverse.size() * pair_bits;
    case InversionMode::classic_fn:
      return count_bits + a.heavy_images.size() * pair_bits + chain_bits;
    case InversionMode::sample_set: return chain_bits;
  }
  return 0;
}

}  // namespace

void write_inversion_sections(BitWriter& out, const InversionAdvice& a) {
  const std::uint64_t L = a.domain_size;
  switch (a.plan.mode) {
    case InversionMode::full_inverse: write_pairs(out, a.full_inverse, L, a.range_size); return;
    case InversionMode::classic_fn: write_pairs(out, a.heavy_images, L, a.range_size); break;
    case InversionMode::sample_set: break;
  }
  if (a.chains.size() != a.plan.r * a.plan.s) throw FormatError("chain count disagrees with plan");
  const unsigned w = field_width(L);
  for (const ChainPair& p : a.chains) {
    out.put(p.start, w);
    out.put(p.end, w);
  }
  out.align();
}

void read_inversion_sections(BitReader& in, InversionAdvice& a) {
  const std::uint64_t L = a.domain_size;
  a.chains.clear();
  a.full_inverse.clear();
  a.heavy_images.clear();
  switch (a.plan.mode) {
    case InversionMode::full_inverse:
      a.full_inverse = read_pairs(in, L, a.range_size);
      a.finalize();
      return;
    case InversionMode::classic_fn: a.heavy_images = read_pairs(in, L, a.range_size); break;
    case InversionMode::sample_set: break;
  }
  const unsigned w = field_width(L);
  if (a.plan.r > (1ULL << 32) || a.plan.s > (1ULL << 32) ||
      a.plan.r * a.plan.s * 2 * w > in.remaining_bits())
    throw FormatError("implausible plan");
  a.chains.resize(a.plan.r * a.plan.s);
  for (ChainPair& p : a.chains) {
    p.start = static_cast<std::uint32_t>(in.get(w));
    p.end = static_cast<std::uint32_t>(in.get(w));
  }
  in.align();
  a.finalize();
}

std::uint64_t inversion_section_bits(const InversionAdvice& a) { return section_bits(a); }

std::uint64_t inversion_bits(const InversionAdvice& a) {
  return kHeaderBits + kPlanBits + kSeedBits + section_bits(a);
}

std::vector<std::uint8_t> serialize_inversion(const InversionAdvice& a) {
  BitWriter out;
  out.put_magic("SIDX");
  out.put_u16(kInversionFormatVersion);
  out.put_u8(static_cast<std::uint8_t>(a.plan.mode));
  out.put_u64(a.domain_size);
  out.put_u64(a.range_size);
  out.put_u64(a.plan.g);
  out.put_u64(a.plan.t);
  out.put_u64(a.plan.s);
  out.put_u64(a.plan.r);
  out.put_f64(a.plan.delta);
  out.put_f64(a.plan.constants.c_g);
  out.put_f64(a.plan.constants.c_t);
  out.put_f64(a.plan.constants.c_s);
  out.put_f64(a.plan.constants.c_r);
  out.put_u8(kSeedCount);
  out.put_u64(a.sample_seed);
  out.put_u64(a.bypass_seed);
  out.put_u64(a.mix_seed);
  write_inversion_sections(out, a);
  return std::move(out).finish();
}

InversionAdvice deserialize_inversion(std::span<const std::uint8_t> bytes) {
  BitReader in(bytes);
  in.expect_magic("SIDX");
  if (in.get_u16() != kInversionFormatVersion) throw FormatError("unsupported SIDX version");
  InversionAdvice a;
  const std::uint8_t mode = in.get_u8();
  if (mode > 2) throw FormatError("unknown inversion mode");
  a.plan.mode = static_cast<InversionMode>(mode);
  a.domain_size = in.get_u64();
  a.range_size = in.get_u64();
  if (a.domain_size == 0 || a.domain_size > (1ULL << 32) || a.range_size == 0 ||
      a.range_size > (1ULL << 32))
    throw FormatError("domain or range out of bounds");
  a.plan.g = in.get_u64();
  a.plan.t = in.get_u64();
  a.plan.s = in.get_u64();
  a.plan.r = in.get_u64();
  a.plan.delta = in.get_f64();
  a.plan.constants.c_g = in.get_f64();
  a.plan.constants.c_t = in.get_f64();
  a.plan.constants.c_s = in.get_f64();
  a.plan.constants.c_r = in.get_f64();
  if (in.get_u8() != kSeedCount) throw FormatError("unexpected seed count");
  a.sample_seed = in.get_u64();
  a.bypass_seed = in.get_u64();
  a.mix_seed = in.get_u64();
  read_inversion_sections(in, a);
  return a;
}

}  // namespace sumindex
