#include "sumindex/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sumindex/errors.hpp"
#include "sumindex/rng.hpp"

namespace sumindex {

namespace {

bool is_xor(const Instance& inst) { return inst.kind == InstanceKind::xork; }

std::uint64_t combine(const Instance& inst, std::uint64_t a, std::uint64_t b) {
  return is_xor(inst) ? a ^ b : a + b;
}

// Coordinate c of an answer tuple ranges over A, except the last coordinate
// of a sum3 tuple which ranges over B.
const std::vector<std::uint64_t>& coord_array(const Instance& inst, unsigned c) {
  return inst.kind == InstanceKind::sum3 && c == 1 ? inst.B : inst.A;
}

void check_budget(const Instance& inst) {
  if (oracle_tuple_count(inst) > kOracleBudget)
    throw BudgetExceeded("exhaustive oracle needs more than 2^26 tuples");
}

struct Keyed {
  std::uint64_t value;
  std::uint64_t rank;
};

void sort_unique_least(std::vector<Keyed>& v) {
  std::sort(v.begin(), v.end(), [](const Keyed& a, const Keyed& b) {
    return a.value != b.value ? a.value < b.value : a.rank < b.rank;
  });
  v.erase(std::unique(v.begin(), v.end(),
                      [](const Keyed& a, const Keyed& b) { return a.value == b.value; }),
          v.end());
}

const Keyed* find_value(const std::vector<Keyed>& v, std::uint64_t value) {
  auto it = std::lower_bound(v.begin(), v.end(), value,
                             [](const Keyed& e, std::uint64_t key) { return e.value < key; });
  return it != v.end() && it->value == value ? &*it : nullptr;
}

}  // namespace

std::uint64_t oracle_tuple_count(const Instance& inst) {
  const std::uint64_t n = inst.n();
  if (inst.kind == InstanceKind::sum3) return n * inst.B.size();
  std::uint64_t out = 1;
  for (unsigned c = 0; c + 1 < inst.k; ++c) {
    if (n != 0 && out > ~0ULL / n) return ~0ULL;
    out *= n;
  }
  return out;
}

OracleAnswer oracle_query(const Instance& inst, std::uint64_t y) {
  check_budget(inst);
  const unsigned arity = inst.arity();
  const auto& last = coord_array(inst, arity - 1);
  const auto& second = coord_array(inst, arity - 2);

  // least (j1, j2) per value of the final two coordinates
  std::vector<Keyed> tail;
  tail.reserve(second.size() * last.size());
  for (std::uint64_t a = 0; a < second.size(); ++a)
    for (std::uint64_t b = 0; b < last.size(); ++b)
      tail.push_back({combine(inst, second[a], last[b]), a * last.size() + b});
  sort_unique_least(tail);

  const unsigned prefix_len = arity - 2;
  std::vector<std::uint64_t> idx(prefix_len, 0);
  const std::uint64_t n = inst.n();
  if (prefix_len > 0 && n == 0) return {};
  while (true) {
    std::uint64_t partial = 0;
    bool over = false;
    for (unsigned c = 0; c < prefix_len; ++c) {
      partial = combine(inst, partial, inst.A[idx[c]]);
      if (!is_xor(inst) && partial > y) over = true;
    }
    if (!over) {
      const std::uint64_t need = is_xor(inst) ? y ^ partial : y - partial;
      if (const Keyed* hit = find_value(tail, need)) {
        std::vector<std::uint64_t> w(idx.begin(), idx.end());
        w.push_back(hit->rank / last.size());
        w.push_back(hit->rank % last.size());
        return {true, std::move(w)};
      }
    }
    unsigned c = prefix_len;
    while (c > 0 && ++idx[c - 1] == n) idx[--c] = 0;
    if (c == 0) break;
  }
  return {};
}

OracleTable::OracleTable(const Instance& inst) : inst_(inst) {
  check_budget(inst_);
  const unsigned arity = inst_.arity();
  base_ = coord_array(inst_, arity - 1).size();
  const std::uint64_t total = oracle_tuple_count(inst_);
  std::vector<Keyed> all;
  all.reserve(total);
  std::vector<std::uint64_t> idx(arity, 0);
  for (std::uint64_t r = 0; r < total; ++r) {
    std::uint64_t v = 0;
    for (unsigned c = 0; c < arity; ++c) v = combine(inst_, v, coord_array(inst_, c)[idx[c]]);
    all.push_back({v, r});
    for (unsigned c = arity; c-- > 0;) {
      if (++idx[c] < coord_array(inst_, c).size()) break;
      idx[c] = 0;
    }
  }
  sort_unique_least(all);
  values_.reserve(all.size());
  ranks_.reserve(all.size());
  for (const Keyed& k : all) {
    values_.push_back(k.value);
    ranks_.push_back(k.rank);
  }
}

std::vector<std::uint64_t> OracleTable::decode(std::uint64_t rank) const {
  const unsigned arity = inst_.arity();
  std::vector<std::uint64_t> out(arity);
  for (unsigned c = arity; c-- > 0;) {
    const std::uint64_t radix = coord_array(inst_, c).size();
    out[c] = rank % radix;
    rank /= radix;
  }
  return out;
}

OracleAnswer OracleTable::query(std::uint64_t y) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), y);
  if (it == values_.end() || *it != y) return {};
  return {true, decode(ranks_[static_cast<std::size_t>(it - values_.begin())])};
}

// ---- generators ---------------------------------------------------------------

const char* profile_name(Profile p) noexcept {
  switch (p) {
    case Profile::uniform: return "uniform";
    case Profile::clustered: return "clustered";
    case Profile::duplicates: return "duplicates";
    case Profile::arithmetic: return "arithmetic";
  }
  return "unknown";
}

Profile parse_profile(std::string_view name) {
  for (Profile p : kAllProfiles)
    if (name == profile_name(p)) return p;
  if (name == "ap" || name == "arithmetic-progression") return Profile::arithmetic;
  throw std::invalid_argument("unknown profile: " + std::string(name));
}

namespace {

std::vector<std::uint64_t> draw_uniform(Rng& rng, std::uint64_t count, std::uint64_t max) {
  std::vector<std::uint64_t> v(count);
  for (auto& x : v) x = uniform_between(rng, 0, max);
  return v;
}

std::vector<std::uint64_t> draw_clustered(Rng& rng, std::uint64_t count, std::uint64_t max,
                                          bool xor_values) {
  std::uint64_t centres = 1;
  while (centres * centres < count) ++centres;
  const std::uint64_t spread = std::min<std::uint64_t>(15, max);
  std::vector<std::uint64_t> c = draw_uniform(rng, centres, max - spread);
  std::vector<std::uint64_t> v(count);
  for (auto& x : v) {
    const std::uint64_t base = c[uniform_below(rng, centres)];
    const std::uint64_t off = uniform_between(rng, 0, spread);
    x = xor_values ? (base & ~spread) | off : base + off;
  }
  return v;
}

std::vector<std::uint64_t> draw_duplicates(Rng& rng, std::uint64_t count, std::uint64_t max) {
  const std::uint64_t repeats = count / 4;
  std::vector<std::uint64_t> v = draw_uniform(rng, count - repeats, max);
  const std::uint64_t fresh = v.size();
  for (std::uint64_t r = 0; r < repeats; ++r) v.push_back(v[uniform_below(rng, fresh)]);
  for (std::uint64_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
  return v;
}

std::vector<std::uint64_t> draw_progression(std::uint64_t count, std::uint64_t start,
                                            std::uint64_t step) {
  std::vector<std::uint64_t> v(count);
  for (std::uint64_t i = 0; i < count; ++i) v[i] = start + i * step;
  return v;
}

}  // namespace

Instance gen_instance(Profile profile, std::uint64_t seed, const GenParams& params) {
  if (params.n == 0) throw std::invalid_argument("n must be positive");
  Instance inst;
  inst.kind = params.kind;
  inst.k = params.kind == InstanceKind::sum3 ? 3 : params.k;
  inst.ell_bits = params.kind == InstanceKind::xork ? params.ell_bits : 0;
  const bool xor_values = params.kind == InstanceKind::xork;
  if (xor_values && (params.ell_bits == 0 || params.ell_bits > 63))
    throw std::invalid_argument("ell must lie in [1, 63]");
  inst.M = xor_values ? (1ULL << params.ell_bits) - 1 : params.M;
  const std::uint64_t max = inst.M;
  const std::uint64_t n = params.n;
  const std::uint64_t m = params.kind == InstanceKind::sum3 ? (params.m ? params.m : n) : 0;

  Rng rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(profile) + 1);
  auto draw = [&](std::uint64_t count) -> std::vector<std::uint64_t> {
    switch (profile) {
      case Profile::uniform: return draw_uniform(rng, count, max);
      case Profile::clustered: return draw_clustered(rng, count, max, xor_values);
      case Profile::duplicates: return draw_duplicates(rng, count, max);
      case Profile::arithmetic: break;
    }
    return {};
  };

  if (profile == Profile::arithmetic) {
    const std::uint64_t longest = std::max(n, m);
    const std::uint64_t step_max = longest > 1 ? std::max<std::uint64_t>(1, max / (longest - 1)) : 1;
    const std::uint64_t step = uniform_between(rng, 1, step_max);
    const std::uint64_t span = (longest - 1) * step;
    if (span > max) throw std::invalid_argument("M too small for a progression of this length");
    if (xor_values) {
      // consecutive vectors from a random start; XOR has no progressions
      const std::uint64_t s = uniform_between(rng, 0, max - (n - 1));
      inst.A = draw_progression(n, s, 1);
    } else {
      inst.A = draw_progression(n, uniform_between(rng, 0, max - (n - 1) * step), step);
      if (m) inst.B = draw_progression(m, uniform_between(rng, 0, max - (m - 1) * step), step);
    }
  } else {
    inst.A = draw(n);
    if (m) inst.B = draw(m);
  }
  validate(inst);
  return inst;
}

}  // namespace sumindex
