#include "sumindex/sum_indexing.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

#include "index_internal.hpp"
#include "sumindex/bits.hpp"
#include "sumindex/cost.hpp"
#include "sumindex/errors.hpp"
#include "sumindex/kxor_indexing.hpp"
#include "sumindex/mixing.hpp"

namespace sumindex {

namespace {

constexpr std::size_t npos = ~std::size_t{0};

bool by_value_then_index(const ValueIndex& a, const ValueIndex& b) {
  return a.value != b.value ? a.value < b.value : a.index < b.index;
}

std::vector<ValueIndex> sort_with_index(std::span<const std::uint64_t> values) {
  std::vector<ValueIndex> out(values.size());
  for (std::size_t j = 0; j < values.size(); ++j)
    out[j] = {values[j], static_cast<std::uint32_t>(j)};
  std::sort(out.begin(), out.end(), by_value_then_index);
  return out;
}

// least j with sorted[j].value == v, charged as a binary search
std::size_t find_value(const std::vector<ValueIndex>& sorted, std::uint64_t v) {
  std::size_t lo = 0, hi = sorted.size();
  std::uint64_t probes = 0;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    ++probes;
    if (sorted[mid].value < v) lo = mid + 1;
    else hi = mid;
  }
  cost::add_probes(probes + 1);
  return lo < sorted.size() && sorted[lo].value == v ? lo : npos;
}

std::size_t find_residue(const std::vector<ResidueEntry>& entries, std::uint64_t r) {
  const auto it = std::lower_bound(
      entries.begin(), entries.end(), r,
      [](const ResidueEntry& e, std::uint64_t key) { return e.residue < key; });
  return it != entries.end() && it->residue == r ? static_cast<std::size_t>(it - entries.begin())
                                                 : npos;
}

void check_index_width(std::size_t count) {
  if (count > 0xFFFFFFFFULL) throw std::invalid_argument("more than 2^32 elements");
}

}  // namespace

// ---- Aux3Sum ----------------------------------------------------------------

Aux3Sum build_aux_3sum(std::span<const std::uint64_t> A, std::span<const std::uint64_t> B,
                       std::uint64_t p, std::uint64_t q, std::uint64_t z) {
  if (p == 0 || q == 0 || z >= p) throw std::invalid_argument("need p, q >= 1 and z in [p]");
  check_index_width(B.size());
  Aux3Sum aux;
  aux.p = p;
  aux.q = q;
  aux.z = z;
  aux.A.assign(A.begin(), A.end());
  aux.sorted_B = sort_with_index(B);
  aux.B_by_mod_q.resize(B.size());
  for (std::size_t j = 0; j < B.size(); ++j)
    aux.B_by_mod_q[j] = {B[j] % q, B[j], static_cast<std::uint32_t>(j)};
  std::sort(aux.B_by_mod_q.begin(), aux.B_by_mod_q.end(),
            [](const ResidueEntry& a, const ResidueEntry& b) {
              return a.residue != b.residue ? a.residue < b.residue : a.j < b.j;
            });
  return aux;
}

std::vector<std::uint8_t> Aux3Sum::serialize(std::uint64_t max_value) const {
  BitWriter out;
  const std::uint64_t n = A.size(), m = sorted_B.size();
  out.put_u64(p);
  out.put_u64(q);
  out.put_u64(z);
  out.put_u64(n);
  out.put_u64(m);
  out.put_u64(max_value);
  const unsigned wv = field_width(max_value + 1), wj = field_width(m), wr = field_width(q);
  for (std::uint64_t a : A) out.put(a, wv);
  for (const ValueIndex& b : sorted_B) {
    out.put(b.value, wv);
    out.put(b.index, wj);
  }
  for (const ResidueEntry& e : B_by_mod_q) {
    out.put(e.residue, wr);
    out.put(e.value, wv);
    out.put(e.j, wj);
  }
  return std::move(out).finish();
}

Aux3Sum Aux3Sum::parse(std::span<const std::uint8_t> bytes) {
  BitReader in(bytes);
  Aux3Sum aux;
  aux.p = in.get_u64();
  aux.q = in.get_u64();
  aux.z = in.get_u64();
  const std::uint64_t n = in.get_u64(), m = in.get_u64(), max_value = in.get_u64();
  if (aux.p == 0 || aux.q == 0 || aux.z >= aux.p || max_value >= (1ULL << 62))
    throw FormatError("bad 3SUM aux header");
  const unsigned wv = field_width(max_value + 1), wj = field_width(m), wr = field_width(aux.q);
  if (n * wv + m * (2 * wv + 2 * wj + wr) > in.remaining_bits())
    throw FormatError("3SUM aux truncated");
  aux.A.resize(n);
  for (auto& a : aux.A) a = in.get(wv);
  aux.sorted_B.resize(m);
  for (auto& b : aux.sorted_B) {
    b.value = in.get(wv);
    b.index = static_cast<std::uint32_t>(in.get(wj));
  }
  aux.B_by_mod_q.resize(m);
  for (auto& e : aux.B_by_mod_q) {
    e.residue = in.get(wr);
    e.value = in.get(wv);
    e.j = static_cast<std::uint32_t>(in.get(wj));
  }
  return aux;
}

std::uint64_t eval_fd_3sum(const Aux3Sum& aux, std::uint64_t d, std::uint64_t i) {
  const std::uint64_t a = aux.A.at(i);
  const std::uint64_t r = (d % aux.q + aux.q - a % aux.q) % aux.q;
  const std::size_t pos = find_residue(aux.B_by_mod_q, r);
  if (pos == npos) return aux.z;
  return (a + aux.B_by_mod_q[pos].value) % aux.p;
}

std::pair<std::uint64_t, std::uint64_t> map_3sum(std::uint64_t y, std::uint64_t p,
                                                 std::uint64_t q) {
  return {y % q, y % p};
}

std::pair<std::uint64_t, std::uint64_t> translate_3sum(const Aux3Sum& aux, std::uint64_t y,
                                                       std::uint64_t i) {
  const std::uint64_t a = aux.A.at(i);
  if (y < a) return {0, 0};
  const std::size_t pos = find_value(aux.sorted_B, y - a);
  if (pos == npos) return {0, 0};
  return {i, aux.sorted_B[pos].index};
}

// ---- SumDecomposition -------------------------------------------------------

SumDecomposition::SumDecomposition(std::shared_ptr<const SumInput> input, Aux3Sum aux)
    : input_(std::move(input)), aux_(std::move(aux)) {
  if (aux_.A.size() != input_->A.size() || aux_.sorted_B.size() != input_->B.size())
    throw std::invalid_argument("aux does not match input sizes");
  const std::uint64_t m = aux_.B_by_mod_q.size();
  if (aux_.q <= 8 * m + 64) {
    class_start_.assign(aux_.q + 1, static_cast<std::uint32_t>(m));
    for (std::size_t k = m; k-- > 0;)
      class_start_[aux_.B_by_mod_q[k].residue] = static_cast<std::uint32_t>(k);
    class_start_[aux_.q] = static_cast<std::uint32_t>(m);
  }
  search_probes_ = static_cast<unsigned>(std::bit_width(m));
}

SumDecomposition SumDecomposition::sample(std::shared_ptr<const SumInput> input, double c,
                                          Rng& rng) {
  const std::uint64_t n = input->A.size(), m = input->B.size();
  const std::uint64_t p = sample_prime(prime_interval(n, input->M, c), rng);
  const std::uint64_t q = sample_prime(prime_interval(m, input->M, c), rng);
  const std::uint64_t z = uniform_below(rng, p);
  Aux3Sum aux = build_aux_3sum(input->A, input->B, p, q, z);
  return SumDecomposition(std::move(input), std::move(aux));
}

std::size_t SumDecomposition::residue_start(std::uint64_t r) const {
  if (!class_start_.empty()) {
    const std::uint32_t pos = class_start_[r];
    return pos < aux_.B_by_mod_q.size() && aux_.B_by_mod_q[pos].residue == r ? pos : npos;
  }
  return find_residue(aux_.B_by_mod_q, r);
}

std::uint64_t SumDecomposition::eval_fd(std::uint64_t d, std::uint64_t i) const {
  // charged as a_i plus a binary search over B_by_mod_q plus the value read
  cost::add_probes(search_probes_ + 2);
  const std::uint64_t a = aux_.A[i];
  const std::uint64_t q = aux_.q;
  const std::uint64_t a_mod = a % q;
  const std::uint64_t r = d >= a_mod ? d - a_mod : d + q - a_mod;
  const std::size_t pos = residue_start(r);
  if (pos == npos) return aux_.z;
  return (a + aux_.B_by_mod_q[pos].value) % aux_.p;
}

std::uint64_t SumDecomposition::map1(std::uint64_t y) const {
  cost::add_probes(1);
  return y % aux_.q;
}

std::uint64_t SumDecomposition::map2(std::uint64_t y) const {
  cost::add_probes(1);
  return y % aux_.p;
}

std::uint64_t SumDecomposition::translate(std::uint64_t y, std::uint64_t i) const {
  const auto [ii, j] = translate_3sum(aux_, y, i);
  return ii * input_->B.size() + j;
}

std::uint64_t SumDecomposition::eval_outer(std::uint64_t x) const {
  const std::uint64_t m = input_->B.size();
  return input_->A[x / m] + input_->B[x % m];
}

std::vector<std::uint8_t> SumDecomposition::aux_bytes() const {
  return aux_.serialize(input_->M);
}

// ---- sumset -----------------------------------------------------------------

namespace {

template <class Combine>
WitnessedSumset build_witnessed(std::span<const std::uint64_t> A, unsigned k, std::uint64_t budget,
                                Combine combine) {
  if (k < 3) throw std::invalid_argument("k must be at least 3");
  const unsigned arity = k - 2;
  const std::uint64_t n = A.size();
  if (n == 0) throw std::invalid_argument("empty A");
  std::uint64_t total = 1;
  for (unsigned i = 0; i < arity; ++i) {
    if (total > budget / n) throw BudgetExceeded("sumset larger than budget");
    total *= n;
  }
  if (total > budget) throw BudgetExceeded("sumset larger than budget");
  check_index_width(total);

  std::vector<std::uint64_t> values(total);
  std::vector<std::uint32_t> tuples(total * arity);
  std::vector<std::uint32_t> idx(arity, 0);
  for (std::uint64_t t = 0; t < total; ++t) {
    std::uint64_t v = 0;
    for (unsigned c = 0; c < arity; ++c) {
      v = c == 0 ? A[idx[c]] : combine(v, A[idx[c]]);
      tuples[t * arity + c] = idx[c];
    }
    values[t] = v;
    for (unsigned c = arity; c-- > 0;) {  // odometer, last index fastest
      if (++idx[c] < n) break;
      idx[c] = 0;
    }
  }
  std::vector<std::uint32_t> order(total);
  for (std::uint64_t t = 0; t < total; ++t) order[t] = static_cast<std::uint32_t>(t);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return values[a] < values[b]; });

  WitnessedSumset out;
  out.arity = arity;
  out.values.resize(total);
  out.witnesses.resize(total * arity);
  for (std::uint64_t t = 0; t < total; ++t) {
    out.values[t] = values[order[t]];
    std::copy_n(tuples.begin() + static_cast<std::ptrdiff_t>(order[t]) * arity, arity,
                out.witnesses.begin() + static_cast<std::ptrdiff_t>(t) * arity);
  }
  return out;
}

}  // namespace

WitnessedSumset build_ksum_sumset(std::span<const std::uint64_t> A, unsigned k,
                                  std::uint64_t budget) {
  return build_witnessed(A, k, budget, [](std::uint64_t a, std::uint64_t b) { return a + b; });
}

WitnessedSumset build_kxor_set(std::span<const std::uint64_t> A, unsigned k, std::uint64_t budget) {
  return build_witnessed(A, k, budget, [](std::uint64_t a, std::uint64_t b) { return a ^ b; });
}

// ---- answer table -----------------------------------------------------------

AnswerTable::AnswerTable(std::vector<std::uint64_t> entries, std::uint64_t N)
    : entries_(std::move(entries)), N_(N) {}

std::optional<std::uint64_t> AnswerTable::query(std::uint64_t y, QueryStats* stats) const {
  if (stats) stats->probes += 1;
  if (y >= entries_.size() || entries_[y] == 0) return std::nullopt;
  return entries_[y] - 1;
}

std::uint64_t AnswerTable::advice_bits() const {
  return 128 + entries_.size() * field_width(N_ + 1);
}

std::vector<std::uint8_t> AnswerTable::serialize() const {
  BitWriter out;
  out.put_u64(N_);
  out.put_u64(entries_.size());
  const unsigned w = field_width(N_ + 1);
  for (std::uint64_t e : entries_) out.put(e, w);
  return std::move(out).finish();
}

AnswerTable AnswerTable::parse(std::span<const std::uint8_t> bytes) {
  BitReader in(bytes);
  const std::uint64_t N = in.get_u64();
  const std::uint64_t count = in.get_u64();
  const unsigned w = field_width(N + 1);
  if (N >= (1ULL << 62) || count * w > in.remaining_bits()) throw FormatError("bad answer table");
  std::vector<std::uint64_t> entries(count);
  for (auto& e : entries) {
    e = in.get(w);
    if (e > N) throw FormatError("answer table entry out of range");
  }
  return AnswerTable(std::move(entries), N);
}

// ---- Index ------------------------------------------------------------------

namespace {

constexpr std::uint64_t kCopyLabel = 0xC0C0A000ULL;

std::unique_ptr<IndexCopy> build_table(const Index::State& st) {
  std::vector<std::uint64_t> entries(st.N_prime, 0);
  const std::uint64_t n = st.inst.n();
  if (st.xor_input) {
    const auto& in = *st.xor_input;
    for (std::uint64_t i = 0; i < n; ++i)
      for (std::uint64_t j = 0; j < st.m; ++j) {
        std::uint64_t& e = entries[in.A[i] ^ in.B[j]];
        if (e == 0) e = i * st.m + j + 1;
      }
  } else {
    const auto& in = *st.sum_input;
    for (std::uint64_t i = 0; i < n; ++i)
      for (std::uint64_t j = 0; j < st.m; ++j) {
        std::uint64_t& e = entries[in.A[i] + in.B[j]];
        if (e == 0) e = i * st.m + j + 1;
      }
  }
  return std::make_unique<AnswerTable>(std::move(entries), st.N);
}

struct CopyRecipe {
  std::shared_ptr<const SumInput> sum_input;
  std::shared_ptr<const XorInput> xor_input;
  IndexConfig config;
  std::uint64_t ell;
};

std::unique_ptr<IndexCopy> build_framework_copy(const CopyRecipe& r, std::uint64_t k) {
  const std::uint64_t copy_seed = derive_key(r.config.seed, kCopyLabel + k);
  Rng rng(derive_key(copy_seed, 1));
  FrameworkOptions opt;
  opt.delta = r.config.delta;
  opt.constants = r.config.constants;
  opt.mode = r.config.mode;
  opt.shared_seed = derive_key(copy_seed, 2);
  opt.start_seed = derive_key(copy_seed, 3);
  opt.threads = r.config.threads;
  if (r.xor_input) {
    XorDecomposition decomp = XorDecomposition::sample(r.xor_input, r.config.xor_extra_bits, rng);
    FrameworkAdvice fw = preprocess_framework(decomp, opt);
    fw.ell = r.ell;
    return std::make_unique<FrameworkCopy<XorDecomposition>>(std::move(decomp), std::move(fw));
  }
  SumDecomposition decomp = SumDecomposition::sample(r.sum_input, r.config.prime_constant, rng);
  FrameworkAdvice fw = preprocess_framework(decomp, opt);
  fw.ell = r.ell;
  return std::make_unique<FrameworkCopy<SumDecomposition>>(std::move(decomp), std::move(fw));
}

void install_builder(Index::State& st) {
  if (st.trivial) {
    // the table is deterministic, so every copy would be identical
    auto table = std::shared_ptr<IndexCopy>(build_table(st));
    st.builder = [table](std::uint64_t) -> std::unique_ptr<WeakInverter> {
      return std::make_unique<AnswerTable>(static_cast<const AnswerTable&>(*table));
    };
  } else {
    CopyRecipe recipe{st.sum_input, st.xor_input, st.config, st.ell};
    st.builder = [recipe](std::uint64_t k) -> std::unique_ptr<WeakInverter> {
      return build_framework_copy(recipe, k);
    };
  }
  st.amplified = std::make_unique<AmplifiedAdvice>(st.builder, st.ell);
}

}  // namespace

std::unique_ptr<IndexCopy> load_copy(const Index::State& st, std::span<const std::uint8_t> bytes) {
  if (st.trivial) return std::make_unique<AnswerTable>(AnswerTable::parse(bytes));
  FrameworkAdvice fw = deserialize_framework(bytes);
  if (st.xor_input) {
    XorDecomposition decomp(st.xor_input, AuxKXor::parse(fw.aux));
    if (decomp.sub_count() != fw.D || decomp.sub_domain() != fw.L || decomp.sub_range() != fw.L_prime)
      throw FormatError("framework header disagrees with aux");
    return std::make_unique<FrameworkCopy<XorDecomposition>>(std::move(decomp), std::move(fw));
  }
  SumDecomposition decomp(st.sum_input, Aux3Sum::parse(fw.aux));
  if (decomp.sub_count() != fw.D || decomp.sub_domain() != fw.L || decomp.sub_range() != fw.L_prime)
    throw FormatError("framework header disagrees with aux");
  return std::make_unique<FrameworkCopy<SumDecomposition>>(std::move(decomp), std::move(fw));
}

Index::Index(std::shared_ptr<State> state) : state_(std::move(state)) {
  if (!state_->amplified) install_builder(*state_);
}

Index Index::build(const Instance& inst, const IndexConfig& config) {
  validate(inst);
  if (!(config.delta >= 0 && config.delta <= 1)) throw std::invalid_argument("delta outside [0, 1]");
  auto st = std::make_shared<State>();
  st->inst = inst;
  st->config = config;
  st->digest = instance_digest(inst);
  const std::uint64_t n = inst.n();

  switch (inst.kind) {
    case InstanceKind::sum3: {
      auto input = std::make_shared<SumInput>();
      input->A = inst.A;
      input->B = inst.B;
      input->M = inst.M;
      input->max_sum = 2 * inst.M;
      st->m = inst.B.size();
      st->trivial = inst.M < 8;
      st->N_prime = 2 * inst.M + 1;
      st->sum_input = std::move(input);
      break;
    }
    case InstanceKind::sumk: {
      auto ws = std::make_shared<WitnessedSumset>(build_ksum_sumset(inst.A, inst.k, config.sumset_budget));
      auto input = std::make_shared<SumInput>();
      input->A = inst.A;
      input->B = ws->values;
      input->M = static_cast<std::uint64_t>(inst.k - 2) * inst.M;
      input->max_sum = static_cast<std::uint64_t>(inst.k - 1) * inst.M;
      st->m = ws->size();
      st->trivial = input->M < 8;
      st->N_prime = input->max_sum + 1;
      st->sum_input = std::move(input);
      st->witnesses = std::move(ws);
      break;
    }
    case InstanceKind::xork: {
      auto ws = std::make_shared<WitnessedSumset>(build_kxor_set(inst.A, inst.k, config.sumset_budget));
      auto input = std::make_shared<XorInput>();
      input->A = inst.A;
      input->B = ws->values;
      input->ell_bits = inst.ell_bits;
      st->m = ws->size();
      st->trivial = kxor_uses_table(n, inst.ell_bits);
      st->N_prime = 1ULL << inst.ell_bits;
      st->xor_input = std::move(input);
      st->witnesses = std::move(ws);
      break;
    }
  }
  st->N = n * st->m;
  st->ell = st->trivial ? 1 : amplification_copies(st->N, st->N_prime);
  return Index(std::move(st));
}

const Instance& Index::instance() const noexcept { return state_->inst; }
const IndexConfig& Index::config() const noexcept { return state_->config; }
bool Index::trivial() const noexcept { return state_->trivial; }
std::uint64_t Index::ell() const noexcept { return state_->ell; }
std::uint64_t Index::outer_domain() const noexcept { return state_->N; }
std::uint64_t Index::outer_range() const noexcept { return state_->N_prime; }
AmplifiedAdvice& Index::amplified() { return *state_->amplified; }
const WeakBuilder& Index::builder() const { return state_->builder; }

std::unique_ptr<IndexCopy> Index::make_copy(std::uint64_t copy_index) const {
  std::unique_ptr<WeakInverter> w = state_->builder(copy_index);
  return std::unique_ptr<IndexCopy>(static_cast<IndexCopy*>(w.release()));
}

std::vector<std::uint64_t> Index::decode(std::uint64_t x) const {
  const State& st = *state_;
  const std::uint64_t i = x / st.m, j = x % st.m;
  if (st.inst.kind == InstanceKind::sum3) return {i, j};
  std::vector<std::uint64_t> out{i};
  for (std::uint32_t w : st.witnesses->witness(j)) out.push_back(w);
  return out;
}

std::optional<std::vector<std::uint64_t>> Index::query(std::uint64_t y, QueryStats* stats) {
  if (y >= state_->N_prime) return std::nullopt;
  const auto x = state_->amplified->query(y, stats);
  if (!x || *x >= state_->N) return std::nullopt;
  std::vector<std::uint64_t> tuple = decode(*x);
  if (tuple_value(state_->inst, tuple) != y) return std::nullopt;
  return tuple;
}

std::vector<std::optional<std::vector<std::uint64_t>>> Index::query_streamed(
    std::span<const std::uint64_t> ys, StreamedResult* info) const {
  StreamedResult res = sumindex::query_streamed(state_->builder, state_->ell, ys);
  std::vector<std::optional<std::vector<std::uint64_t>>> out(ys.size());
  for (std::size_t k = 0; k < ys.size(); ++k) {
    if (!res.answers[k] || *res.answers[k] >= state_->N) continue;
    auto tuple = decode(*res.answers[k]);
    if (tuple_value(state_->inst, tuple) == ys[k]) out[k] = std::move(tuple);
  }
  if (info) *info = std::move(res);
  return out;
}

std::uint64_t Index::witness_bits() const {
  const State& st = *state_;
  if (!st.witnesses) return 0;
  return st.witnesses->size() * st.witnesses->arity * field_width(st.inst.n());
}

std::uint64_t Index::advice_bits() const {
  return witness_bits() + state_->amplified->advice_bits();
}

Index preprocess_3sum(std::span<const std::uint64_t> A, std::span<const std::uint64_t> B,
                      std::uint64_t M, const IndexConfig& config) {
  Instance inst;
  inst.kind = InstanceKind::sum3;
  inst.A.assign(A.begin(), A.end());
  inst.B.assign(B.begin(), B.end());
  inst.M = M;
  return Index::build(inst, config);
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> query_3sum(Index& index, std::uint64_t y,
                                                                   QueryStats* stats) {
  const auto t = index.query(y, stats);
  if (!t) return std::nullopt;
  return std::make_pair((*t)[0], (*t)[1]);
}

Index preprocess_ksum(std::span<const std::uint64_t> A, unsigned k, std::uint64_t M,
                      const IndexConfig& config) {
  Instance inst;
  inst.kind = InstanceKind::sumk;
  inst.A.assign(A.begin(), A.end());
  inst.k = k;
  inst.M = M;
  return Index::build(inst, config);
}

std::optional<std::vector<std::uint64_t>> query_ksum(Index& index, std::uint64_t b,
                                                     QueryStats* stats) {
  return index.query(b, stats);
}

}  // namespace sumindex
