#include "sumindex/kxor_indexing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "sumindex/bits.hpp"
#include "sumindex/cost.hpp"
#include "sumindex/errors.hpp"

namespace sumindex {

namespace {

constexpr std::size_t npos = ~std::size_t{0};
constexpr unsigned kMaxDenseResidueBits = 24;

unsigned ceil_log2(std::uint64_t v) {
  return v <= 1 ? 0u : static_cast<unsigned>(std::bit_width(v - 1));
}

std::size_t find_residue(const std::vector<ResidueEntry>& entries, std::uint64_t r) {
  const auto it = std::lower_bound(
      entries.begin(), entries.end(), r,
      [](const ResidueEntry& e, std::uint64_t key) { return e.residue < key; });
  return it != entries.end() && it->residue == r ? static_cast<std::size_t>(it - entries.begin())
                                                 : npos;
}

void put_matrix(BitWriter& out, const F2Matrix& m) {
  out.put_u8(static_cast<std::uint8_t>(m.rows()));
  out.put_u8(static_cast<std::uint8_t>(m.cols()));
  for (unsigned i = 0; i < m.rows(); ++i) out.put(m.row(i), m.cols());
}

F2Matrix get_matrix(BitReader& in) {
  const unsigned rows = in.get_u8(), cols = in.get_u8();
  if (rows > 64 || cols > 64) throw FormatError("matrix too large");
  F2Matrix m(rows, cols);
  for (unsigned i = 0; i < rows; ++i) m.set_row(i, in.get(cols));
  return m;
}

}  // namespace

bool kxor_uses_table(std::uint64_t n, unsigned ell_bits) {
  const double need = std::ceil(1.5 * std::log2(static_cast<double>(std::max<std::uint64_t>(n, 1))) - 1e-9);
  return static_cast<double>(ell_bits) < need;
}

std::pair<unsigned, unsigned> kxor_dimensions(std::uint64_t n, std::uint64_t m, unsigned ell_bits,
                                              unsigned extra_bits) {
  return {std::min(ceil_log2(n) + extra_bits, ell_bits), std::min(ceil_log2(m) + extra_bits, ell_bits)};
}

AuxKXor build_aux_kxor(std::span<const std::uint64_t> A, std::span<const std::uint64_t> B,
                       F2Matrix P, F2Matrix Q, std::uint64_t z) {
  if (P.cols() != Q.cols()) throw std::invalid_argument("P and Q need the same width");
  if (P.rows() < 64 && (z >> P.rows())) throw std::invalid_argument("z outside F_2^p");
  if (B.size() > 0xFFFFFFFFULL) throw std::invalid_argument("more than 2^32 elements");
  AuxKXor aux;
  aux.P = std::move(P);
  aux.Q = std::move(Q);
  aux.z = z;
  aux.A.assign(A.begin(), A.end());
  aux.sorted_B.resize(B.size());
  for (std::size_t j = 0; j < B.size(); ++j) aux.sorted_B[j] = {B[j], static_cast<std::uint32_t>(j)};
  std::sort(aux.sorted_B.begin(), aux.sorted_B.end(), [](const ValueIndex& a, const ValueIndex& b) {
    return a.value != b.value ? a.value < b.value : a.index < b.index;
  });
  std::vector<std::uint64_t> residues(B.size());
  f2_matvec_batch(aux.Q, B, residues);
  aux.B_by_Q.resize(B.size());
  for (std::size_t j = 0; j < B.size(); ++j)
    aux.B_by_Q[j] = {residues[j], B[j], static_cast<std::uint32_t>(j)};
  std::sort(aux.B_by_Q.begin(), aux.B_by_Q.end(), [](const ResidueEntry& a, const ResidueEntry& b) {
    return a.residue != b.residue ? a.residue < b.residue : a.j < b.j;
  });
  return aux;
}

std::vector<std::uint8_t> AuxKXor::serialize() const {
  BitWriter out;
  const unsigned ell = P.cols();
  const std::uint64_t m = sorted_B.size();
  put_matrix(out, P);
  put_matrix(out, Q);
  out.put(z, P.rows());
  out.put_u64(A.size());
  out.put_u64(m);
  const unsigned wj = field_width(m);
  for (std::uint64_t a : A) out.put(a, ell);
  for (const ValueIndex& b : sorted_B) {
    out.put(b.value, ell);
    out.put(b.index, wj);
  }
  for (const ResidueEntry& e : B_by_Q) {
    out.put(e.residue, Q.rows());
    out.put(e.value, ell);
    out.put(e.j, wj);
  }
  return std::move(out).finish();
}

AuxKXor AuxKXor::parse(std::span<const std::uint8_t> bytes) {
  BitReader in(bytes);
  AuxKXor aux;
  aux.P = get_matrix(in);
  aux.Q = get_matrix(in);
  if (aux.P.cols() != aux.Q.cols()) throw FormatError("P and Q widths differ");
  const unsigned ell = aux.P.cols();
  aux.z = in.get(aux.P.rows());
  const std::uint64_t n = in.get_u64(), m = in.get_u64();
  const unsigned wj = field_width(m);
  if (n * ell + m * (2 * ell + 2 * wj + aux.Q.rows()) > in.remaining_bits())
    throw FormatError("kXOR aux truncated");
  aux.A.resize(n);
  for (auto& a : aux.A) a = in.get(ell);
  aux.sorted_B.resize(m);
  for (auto& b : aux.sorted_B) {
    b.value = in.get(ell);
    b.index = static_cast<std::uint32_t>(in.get(wj));
  }
  aux.B_by_Q.resize(m);
  for (auto& e : aux.B_by_Q) {
    e.residue = in.get(aux.Q.rows());
    e.value = in.get(ell);
    e.j = static_cast<std::uint32_t>(in.get(wj));
  }
  return aux;
}

std::uint64_t eval_fd_kxor(const AuxKXor& aux, std::uint64_t d, std::uint64_t i) {
  const std::uint64_t a = aux.A.at(i);
  const std::size_t pos = find_residue(aux.B_by_Q, d ^ f2_matvec(aux.Q, a));
  if (pos == npos) return aux.z;
  return f2_matvec(aux.P, a ^ aux.B_by_Q[pos].value);
}

XorDecomposition::XorDecomposition(std::shared_ptr<const XorInput> input, AuxKXor aux)
    : input_(std::move(input)), aux_(std::move(aux)) {
  if (aux_.A.size() != input_->A.size() || aux_.sorted_B.size() != input_->B.size())
    throw std::invalid_argument("aux does not match input sizes");
  if (aux_.P.cols() != input_->ell_bits) throw std::invalid_argument("matrix width is not ell");
  const std::size_t n = aux_.A.size(), m = aux_.B_by_Q.size();
  Qa_.resize(n);
  Pa_.resize(n);
  f2_matvec_batch(aux_.Q, aux_.A, Qa_);
  f2_matvec_batch(aux_.P, aux_.A, Pa_);
  std::vector<std::uint64_t> entry_values(m);
  for (std::size_t k = 0; k < m; ++k) entry_values[k] = aux_.B_by_Q[k].value;
  P_entry_.resize(m);
  f2_matvec_batch(aux_.P, entry_values, P_entry_);
  if (aux_.q() <= kMaxDenseResidueBits) {
    const std::uint64_t classes = 1ULL << aux_.q();
    class_start_.assign(classes + 1, static_cast<std::uint32_t>(m));
    for (std::size_t k = m; k-- > 0;)
      class_start_[aux_.B_by_Q[k].residue] = static_cast<std::uint32_t>(k);
  }
  search_probes_ = static_cast<unsigned>(std::bit_width(m));
}

XorDecomposition XorDecomposition::sample(std::shared_ptr<const XorInput> input,
                                          unsigned extra_bits, Rng& rng) {
  const auto [p, q] =
      kxor_dimensions(input->A.size(), input->B.size(), input->ell_bits, extra_bits);
  F2Matrix P = sample_full_rank(p, input->ell_bits, rng);
  F2Matrix Q = sample_full_rank(q, input->ell_bits, rng);
  const std::uint64_t z = uniform_below(rng, 1ULL << p);
  AuxKXor aux = build_aux_kxor(input->A, input->B, std::move(P), std::move(Q), z);
  return XorDecomposition(std::move(input), std::move(aux));
}

std::uint64_t XorDecomposition::eval_fd(std::uint64_t d, std::uint64_t i) const {
  cost::add_probes(search_probes_ + 2);
  const std::uint64_t r = d ^ Qa_[i];
  std::size_t pos;
  if (!class_start_.empty()) {
    pos = class_start_[r];
    if (pos >= aux_.B_by_Q.size() || aux_.B_by_Q[pos].residue != r) pos = npos;
  } else {
    pos = find_residue(aux_.B_by_Q, r);
  }
  if (pos == npos) return aux_.z;
  return Pa_[i] ^ P_entry_[pos];
}

std::uint64_t XorDecomposition::map1(std::uint64_t y) const {
  cost::add_probes(aux_.q());
  return f2_matvec(aux_.Q, y);
}

std::uint64_t XorDecomposition::map2(std::uint64_t y) const {
  cost::add_probes(aux_.p());
  return f2_matvec(aux_.P, y);
}

std::uint64_t XorDecomposition::translate(std::uint64_t y, std::uint64_t i) const {
  const std::uint64_t target = aux_.A[i] ^ y;
  const auto& sorted = aux_.sorted_B;
  std::size_t lo = 0, hi = sorted.size();
  std::uint64_t probes = 0;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    ++probes;
    if (sorted[mid].value < target) lo = mid + 1;
    else hi = mid;
  }
  cost::add_probes(probes + 1);
  if (lo == sorted.size() || sorted[lo].value != target) return 0;
  return i * input_->B.size() + sorted[lo].index;
}

std::uint64_t XorDecomposition::eval_outer(std::uint64_t x) const {
  const std::uint64_t m = input_->B.size();
  return input_->A[x / m] ^ input_->B[x % m];
}

std::vector<std::uint8_t> XorDecomposition::aux_bytes() const { return aux_.serialize(); }

}  // namespace sumindex
