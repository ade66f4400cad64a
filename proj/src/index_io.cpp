#include "sumindex/index_io.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <memory>

#include "index_internal.hpp"
#include "sumindex/bits.hpp"
#include "sumindex/errors.hpp"

namespace sumindex {

namespace {

constexpr double kDeltaScale = 4294967296.0;

std::vector<std::uint8_t> header_bytes(const Index& index) {
  const Index::State& st = index.state();
  const IndexConfig& c = st.config;
  BitWriter out;
  out.put_magic("SIAD");
  out.put_u16(kAdviceFormatVersion);
  out.put_u8(static_cast<std::uint8_t>(st.inst.kind));
  out.put_u64(st.digest);
  out.put_u64(static_cast<std::uint64_t>(std::llround(c.delta * kDeltaScale)));
  out.put_f64(c.prime_constant);
  out.put_f64(c.constants.c_g);
  out.put_f64(c.constants.c_t);
  out.put_f64(c.constants.c_s);
  out.put_f64(c.constants.c_r);
  out.put_u8(static_cast<std::uint8_t>(c.mode));
  out.put_u64(c.seed);
  out.put_u8(static_cast<std::uint8_t>(c.xor_extra_bits));
  out.put_u64(c.sumset_budget);
  out.put_u64(st.ell);
  out.put_bool(st.trivial);
  out.align();
  if (st.witnesses) {
    const WitnessedSumset& ws = *st.witnesses;
    out.put_u64(ws.size());
    out.put_u8(static_cast<std::uint8_t>(ws.arity));
    const unsigned w = field_width(st.inst.n());
    for (std::uint32_t v : ws.witnesses) out.put(v, w);
  } else {
    out.put_u64(0);
    out.put_u8(0);
  }
  out.align();
  return std::move(out).finish();
}

void put_len(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void emit(const Index& index, const std::function<void(std::span<const std::uint8_t>)>& sink) {
  sink(header_bytes(index));
  for (std::uint64_t k = 0; k < index.ell(); ++k) {
    const std::vector<std::uint8_t> blob = index.make_copy(k)->serialize();
    std::vector<std::uint8_t> len;
    put_len(len, blob.size());
    sink(len);
    sink(blob);
  }
}

struct LoadedFile {
  std::vector<std::uint8_t> bytes;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> blobs;  // offset, length
};

}  // namespace

std::vector<std::uint8_t> serialize_index(const Index& index) {
  std::vector<std::uint8_t> out;
  emit(index, [&](std::span<const std::uint8_t> b) { out.insert(out.end(), b.begin(), b.end()); });
  return out;
}

std::uint64_t write_advice_file(const std::filesystem::path& path, const Index& index) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  std::uint64_t written = 0;
  emit(index, [&](std::span<const std::uint8_t> b) {
    f.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
    written += b.size();
  });
  if (!f) throw std::runtime_error("write failed: " + path.string());
  return written;
}

Index deserialize_index(std::vector<std::uint8_t> bytes, const Instance& inst) {
  auto file = std::make_shared<LoadedFile>();
  file->bytes = std::move(bytes);
  BitReader in(file->bytes);
  in.expect_magic("SIAD");
  if (in.get_u16() != kAdviceFormatVersion) throw FormatError("unsupported advice version");
  const std::uint8_t kind = in.get_u8();
  const std::uint64_t digest = in.get_u64();
  if (kind != static_cast<std::uint8_t>(inst.kind) || digest != instance_digest(inst))
    throw DigestMismatch("advice was built for a different instance");
  IndexConfig c;
  c.delta = static_cast<double>(in.get_u64()) / kDeltaScale;
  c.prime_constant = in.get_f64();
  c.constants.c_g = in.get_f64();
  c.constants.c_t = in.get_f64();
  c.constants.c_s = in.get_f64();
  c.constants.c_r = in.get_f64();
  const std::uint8_t mode = in.get_u8();
  if (mode > static_cast<std::uint8_t>(InversionMode::sample_set)) throw FormatError("bad mode");
  c.mode = static_cast<InversionMode>(mode);
  c.seed = in.get_u64();
  c.xor_extra_bits = in.get_u8();
  c.sumset_budget = in.get_u64();
  const std::uint64_t ell = in.get_u64();
  const bool trivial = in.get_bool();
  in.align();

  Index fresh = Index::build(inst, c);
  Index::State& st = fresh.state();
  if (st.ell != ell || st.trivial != trivial) throw FormatError("advice header disagrees with instance");

  const std::uint64_t count = in.get_u64();
  const unsigned arity = in.get_u8();
  if (st.witnesses) {
    const WitnessedSumset& ws = *st.witnesses;
    if (count != ws.size() || arity != ws.arity) throw FormatError("witness section size");
    const unsigned w = field_width(inst.n());
    if (count * arity * w > in.remaining_bits()) throw FormatError("witness section truncated");
    for (std::uint32_t v : ws.witnesses)
      if (in.get(w) != v) throw FormatError("witness section disagrees with instance");
  } else if (count != 0) {
    throw FormatError("unexpected witness section");
  }
  in.align();

  std::uint64_t pos = in.position_bits() / 8;
  for (std::uint64_t k = 0; k < ell; ++k) {
    if (pos + 8 > file->bytes.size()) throw FormatError("missing advice copy");
    std::uint64_t len = 0;
    for (int b = 0; b < 8; ++b) len |= static_cast<std::uint64_t>(file->bytes[pos + b]) << (8 * b);
    pos += 8;
    if (len > file->bytes.size() - pos) throw FormatError("truncated advice copy");
    file->blobs.emplace_back(pos, len);
    pos += len;
  }
  if (pos != file->bytes.size()) throw FormatError("trailing bytes after advice copies");

  auto state = std::make_shared<Index::State>(std::move(st));
  const Index::State* raw = state.get();
  state->builder = [file, raw](std::uint64_t k) -> std::unique_ptr<WeakInverter> {
    if (k >= file->blobs.size()) throw std::out_of_range("copy index");
    const auto [off, len] = file->blobs[k];
    return load_copy(*raw, std::span<const std::uint8_t>(file->bytes).subspan(off, len));
  };
  state->amplified = std::make_unique<AmplifiedAdvice>(state->builder, ell);
  return Index(std::move(state));
}

Index read_advice_file(const std::filesystem::path& path, const Instance& inst) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return deserialize_index(std::move(bytes), inst);
}

}  // namespace sumindex
