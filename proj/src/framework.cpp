#include "sumindex/framework.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "sumindex/bits.hpp"
#include "sumindex/cost.hpp"
#include "sumindex/errors.hpp"
#include "sumindex/inversion_io.hpp"

namespace sumindex {

namespace {

constexpr std::uint16_t kFrameworkVersion = 1;
constexpr double kDeltaScale = 4294967296.0;  // delta stored as u64 fixed point, 32 fraction bits
// magic, version, D, L, L', delta, ell, plan (mode, g, t, s, r, four constants)
constexpr std::uint64_t kHeaderBits = 32 + 16 + 3 * 64 + 64 + 64 + 8 + 4 * 64 + 4 * 64;

double quantize_delta(double delta) {
  return std::round(delta * kDeltaScale) / kDeltaScale;
}

InversionAdvice entry_shell(const FrameworkAdvice& fw) {
  InversionAdvice a;
  a.plan = fw.plan;
  a.domain_size = fw.L;
  a.range_size = fw.L_prime;
  const SharedSeeds seeds = expand_shared_seed(fw.shared_seed);
  a.sample_seed = seeds.sample_seed;
  a.bypass_seed = seeds.bypass_seed;
  a.mix_seed = seeds.mix_seed;
  return a;
}

struct Header {
  FrameworkAdvice fw;
  std::uint64_t blob_start = 0;  // byte position of the first per-d blob
  std::vector<std::uint64_t> offsets;
};

Header read_header(BitReader& in, bool read_aux) {
  Header h;
  FrameworkAdvice& fw = h.fw;
  in.expect_magic("SFW1");
  if (in.get_u16() != kFrameworkVersion) throw FormatError("unsupported SFW1 version");
  fw.D = in.get_u64();
  fw.L = in.get_u64();
  fw.L_prime = in.get_u64();
  if (fw.L == 0 || fw.L > (1ULL << 32) || fw.L_prime == 0 || fw.L_prime > (1ULL << 32))
    throw FormatError("sub-function sizes out of bounds");
  fw.delta = static_cast<double>(in.get_u64()) / kDeltaScale;
  fw.ell = in.get_u64();
  const std::uint8_t mode = in.get_u8();
  if (mode > 2) throw FormatError("unknown inversion mode");
  fw.plan.mode = static_cast<InversionMode>(mode);
  fw.plan.g = in.get_u64();
  fw.plan.t = in.get_u64();
  fw.plan.s = in.get_u64();
  fw.plan.r = in.get_u64();
  fw.plan.delta = fw.delta;
  fw.plan.constants.c_g = in.get_f64();
  fw.plan.constants.c_t = in.get_f64();
  fw.plan.constants.c_s = in.get_f64();
  fw.plan.constants.c_r = in.get_f64();
  const std::uint64_t aux_len = in.get_u64();
  in.align();
  if (aux_len * 8 > in.remaining_bits()) throw FormatError("aux longer than file");
  if (read_aux) {
    fw.aux.resize(aux_len);
    for (auto& b : fw.aux) b = in.get_u8();
  } else {
    for (std::uint64_t i = 0; i < aux_len; ++i) in.get_u8();
  }
  fw.shared_seed = in.get_u64();
  fw.seed_expansion_bits = in.get_u64();
  in.align();
  if (fw.D * 64 > in.remaining_bits()) throw FormatError("offset index longer than file");
  h.offsets.resize(fw.D);
  for (auto& o : h.offsets) o = in.get_u64();
  h.blob_start = in.position_bits() / 8;
  return h;
}

InversionAdvice read_entry(std::span<const std::uint8_t> bytes, const Header& h, std::uint64_t d) {
  const std::uint64_t begin = h.blob_start + h.offsets[d];
  if (begin > bytes.size()) throw FormatError("offset past end of file");
  BitReader in(bytes.subspan(begin));
  InversionAdvice a = entry_shell(h.fw);
  read_inversion_sections(in, a);
  return a;
}

}  // namespace

FunctionSpec sub_function(const Decomposition& decomp, std::uint64_t d) {
  return FunctionSpec(decomp.sub_domain(), decomp.sub_range(),
                      [&decomp, d](std::uint64_t x) { return decomp.eval_fd(d, x); });
}

void FrameworkAdvice::account() {
  std::uint64_t bits = kHeaderBits + 64 + 8 * aux.size() + 128 + 64 * D;
  for (const InversionAdvice& a : per_d) bits += inversion_section_bits(a);
  total_bits = bits;
}

unsigned worker_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SUMINDEX_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

FrameworkAdvice preprocess_framework(const Decomposition& decomp, const FrameworkOptions& opt) {
  FrameworkAdvice fw;
  fw.D = decomp.sub_count();
  fw.L = decomp.sub_domain();
  fw.L_prime = decomp.sub_range();
  fw.delta = quantize_delta(opt.delta);
  fw.plan = plan_parameters(fw.L, fw.delta, opt.constants, opt.mode);
  fw.aux = decomp.aux_bytes();
  fw.shared_seed = opt.shared_seed;
  fw.seed_expansion_bits = fw.plan.g * field_width(fw.L);

  const long double per_d = fw.plan.mode == InversionMode::full_inverse
                                ? static_cast<long double>(fw.L)
                                : static_cast<long double>(fw.plan.r) * fw.plan.s * fw.plan.t + fw.plan.g;
  if (fw.D > (1ULL << 32) || per_d * fw.D > static_cast<long double>(opt.eval_budget))
    throw BudgetExceeded("preprocessing would need about " +
                         std::to_string(static_cast<double>(per_d * fw.D)) + " evaluations over " +
                         std::to_string(fw.D) + " sub-functions");
  fw.per_d.resize(fw.D);

  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> evals{0};
  auto work = [&] {
    for (;;) {
      const std::uint64_t d = next.fetch_add(1);
      if (d >= fw.D) return;
      const FunctionSpec f = sub_function(decomp, d);
      fw.per_d[d] = preprocess_inversion(f, fw.plan, fw.shared_seed, derive_key(opt.start_seed, d));
      evals.fetch_add(f.evaluations());
    }
  };
  const unsigned threads = std::min<std::uint64_t>(worker_threads(opt.threads), fw.D);
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  fw.preprocess_evals = evals.load();
  fw.account();
  return fw;
}

std::optional<std::uint64_t> query_framework(const FrameworkAdvice& advice,
                                             const Decomposition& decomp, std::uint64_t y,
                                             QueryStats* stats) {
  std::uint64_t probes = 0;
  std::uint64_t evals = 0;
  std::optional<std::uint64_t> answer;
  if (y < decomp.outer_range()) {
    cost::ProbeScope scope(probes);
    const std::uint64_t d = decomp.map1(y);
    const std::uint64_t y_sub = decomp.map2(y);
    const FunctionSpec f = sub_function(decomp, d);
    cost::add_probes(1);  // offset index entry
    const auto x_sub = invert(advice.per_d.at(d), f, y_sub);
    evals = f.evaluations();
    if (x_sub) {
      const std::uint64_t x = decomp.translate(y, *x_sub);
      ++evals;
      if (x < decomp.outer_domain() && decomp.eval_outer(x) == y) answer = x;
    }
  }
  if (stats) {
    stats->evals += evals;
    stats->probes += probes;
  }
  return answer;
}

std::vector<std::uint8_t> serialize_framework(const FrameworkAdvice& fw) {
  if (fw.per_d.size() != fw.D) throw FormatError("per-d advice count disagrees with D");
  BitWriter out;
  out.put_magic("SFW1");
  out.put_u16(kFrameworkVersion);
  out.put_u64(fw.D);
  out.put_u64(fw.L);
  out.put_u64(fw.L_prime);
  out.put_u64(static_cast<std::uint64_t>(std::llround(fw.delta * kDeltaScale)));
  out.put_u64(fw.ell);
  out.put_u8(static_cast<std::uint8_t>(fw.plan.mode));
  out.put_u64(fw.plan.g);
  out.put_u64(fw.plan.t);
  out.put_u64(fw.plan.s);
  out.put_u64(fw.plan.r);
  out.put_f64(fw.plan.constants.c_g);
  out.put_f64(fw.plan.constants.c_t);
  out.put_f64(fw.plan.constants.c_s);
  out.put_f64(fw.plan.constants.c_r);
  out.put_u64(fw.aux.size());
  out.align();
  for (std::uint8_t b : fw.aux) out.put_u8(b);
  out.put_u64(fw.shared_seed);
  out.put_u64(fw.seed_expansion_bits);

  std::vector<std::vector<std::uint8_t>> blobs(fw.D);
  for (std::uint64_t d = 0; d < fw.D; ++d) {
    BitWriter blob;
    write_inversion_sections(blob, fw.per_d[d]);
    blobs[d] = std::move(blob).finish();
  }
  out.align();
  std::uint64_t offset = 0;
  for (const auto& b : blobs) {
    out.put_u64(offset);
    offset += b.size();
  }
  // written again rather than copied so section padding stays out of the payload count
  for (std::uint64_t d = 0; d < fw.D; ++d) write_inversion_sections(out, fw.per_d[d]);
  return std::move(out).finish();
}

FrameworkAdvice deserialize_framework(std::span<const std::uint8_t> bytes) {
  BitReader in(bytes);
  Header h = read_header(in, true);
  std::vector<InversionAdvice> per_d(h.fw.D);
  for (std::uint64_t d = 0; d < h.fw.D; ++d) per_d[d] = read_entry(bytes, h, d);
  FrameworkAdvice fw = std::move(h.fw);
  fw.per_d = std::move(per_d);
  fw.account();
  return fw;
}

InversionAdvice read_framework_entry(std::span<const std::uint8_t> bytes, std::uint64_t d) {
  BitReader in(bytes);
  const Header h = read_header(in, false);
  if (d >= h.fw.D) throw std::out_of_range("sub-function index");
  return read_entry(bytes, h, d);
}

// ---- amplification ---------------------------------------------------------

std::uint64_t amplification_copies(std::uint64_t N, std::uint64_t N_prime) {
  if (N == 0 || N_prime == 0) throw std::invalid_argument("empty domain or range");
  const u128 prod = static_cast<u128>(N) * N_prime;
  std::uint64_t ell = 0;
  while ((static_cast<u128>(1) << ell) < prod) ++ell;
  return ell == 0 ? 1 : ell;
}

AmplifiedAdvice::AmplifiedAdvice(WeakBuilder builder, std::uint64_t ell)
    : builder_(std::move(builder)), ell_(ell) {
  if (ell_ == 0) throw std::invalid_argument("need at least one copy");
}

std::uint64_t AmplifiedAdvice::built() const noexcept {
  std::uint64_t n = 0;
  for (const auto& c : copies_) n += c != nullptr;
  return n;
}

const WeakInverter& AmplifiedAdvice::copy(std::uint64_t k) {
  if (k >= ell_) throw std::out_of_range("copy index");
  if (copies_.size() <= k) copies_.resize(k + 1);
  if (!copies_[k]) copies_[k] = builder_(k);
  return *copies_[k];
}

void AmplifiedAdvice::build_all() {
  for (std::uint64_t k = 0; k < ell_; ++k) copy(k);
}

std::optional<std::uint64_t> AmplifiedAdvice::query(std::uint64_t y, QueryStats* stats) {
  for (std::uint64_t k = 0; k < ell_; ++k) {
    if (auto x = copy(k).query(y, stats)) return x;
  }
  return std::nullopt;
}

std::uint64_t AmplifiedAdvice::advice_bits() const {
  std::uint64_t bits = 0;
  for (const auto& c : copies_)
    if (c) bits += c->advice_bits();
  return bits;
}

std::uint64_t AmplifiedAdvice::preprocess_evals() const {
  std::uint64_t evals = 0;
  for (const auto& c : copies_)
    if (c) evals += c->preprocess_evals();
  return evals;
}

StreamedResult query_streamed(const WeakBuilder& builder, std::uint64_t ell,
                              std::span<const std::uint64_t> queries) {
  StreamedResult out;
  out.answers.assign(queries.size(), std::nullopt);
  out.stats.assign(queries.size(), QueryStats{});
  std::vector<std::size_t> open(queries.size());
  for (std::size_t i = 0; i < open.size(); ++i) open[i] = i;
  for (std::uint64_t k = 0; k < ell && !open.empty(); ++k) {
    const std::unique_ptr<WeakInverter> copy = builder(k);
    ++out.copies_built;
    out.max_copy_bits = std::max(out.max_copy_bits, copy->advice_bits());
    out.preprocess_evals += copy->preprocess_evals();
    std::vector<std::size_t> still_open;
    for (std::size_t i : open) {
      out.answers[i] = copy->query(queries[i], &out.stats[i]);
      if (!out.answers[i]) still_open.push_back(i);
    }
    open.swap(still_open);
  }
  return out;
}

}  // namespace sumindex
