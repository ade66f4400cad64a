#include "sumindex/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sumindex/cost.hpp"
#include "sumindex/inversion_io.hpp"
#include "sumindex/kernels.hpp"

namespace sumindex {

namespace {

constexpr std::uint64_t kSampleLabel = 0x5A3D1E01ULL;
constexpr std::uint64_t kBypassLabel = 0x5A3D1E02ULL;
constexpr std::uint64_t kMixLabel = 0x5A3D1E03ULL;
constexpr std::uint64_t kStartLabel = 0x5A3D1E04ULL;

// ceil() that forgives floating noise such as pow(2^16, 0.75) = 4096.0000001.
std::uint64_t ceil_count(double x) {
  if (!(x > 0)) return 1;
  const double c = std::ceil(x * (1 - 1e-12));
  if (c >= 1.8e19) throw std::invalid_argument("plan parameter overflows");
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(c));
}

void check_delta(double delta) {
  if (!std::isfinite(delta) || delta < 0 || delta > 1)
    throw std::invalid_argument("delta must lie in [0, 1]");
}

// Binary search for the first pair with end >= key; charges one word per
// pair inspected.
std::size_t lower_bound_end(std::span<const ChainPair> pairs, std::uint64_t key) {
  std::size_t lo = 0, hi = pairs.size();
  std::uint64_t probes = 0;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    ++probes;
    if (pairs[mid].end < key) lo = mid + 1;
    else hi = mid;
  }
  cost::add_probes(probes);
  return lo;
}

std::optional<std::uint64_t> lookup_image(const std::vector<ImagePair>& sorted, std::uint64_t y) {
  std::size_t lo = 0, hi = sorted.size();
  std::uint64_t probes = 0;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    ++probes;
    if (sorted[mid].image < y) lo = mid + 1;
    else hi = mid;
  }
  if (lo < sorted.size() && sorted[lo].image == y) {
    cost::add_probes(probes + 1);
    return sorted[lo].preimage;
  }
  cost::add_probes(probes);
  return std::nullopt;
}

// Sorted (image, preimage) pairs, one per distinct image, smallest preimage.
std::vector<ImagePair> image_pairs(const FunctionSpec& f, std::span<const std::uint64_t> points) {
  std::vector<ImagePair> out;
  out.reserve(points.size());
  for (std::uint64_t x : points)
    out.push_back({static_cast<std::uint32_t>(f(x)), static_cast<std::uint32_t>(x)});
  std::sort(out.begin(), out.end(), [](const ImagePair& a, const ImagePair& b) {
    return a.image != b.image ? a.image < b.image : a.preimage < b.preimage;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const ImagePair& a, const ImagePair& b) { return a.image == b.image; }),
            out.end());
  return out;
}

// Evaluator calls still allowed for the current query.
class EvalBudget {
 public:
  EvalBudget(const FunctionSpec& f, std::uint64_t budget)
      : f_(f), limit_(f.evaluations() + budget) {}
  bool exhausted() const noexcept { return f_.evaluations() >= limit_; }

 private:
  const FunctionSpec& f_;
  std::uint64_t limit_;
};

}  // namespace

const char* mode_name(InversionMode mode) noexcept {
  switch (mode) {
    case InversionMode::full_inverse: return "full_inverse";
    case InversionMode::classic_fn: return "classic_fn";
    case InversionMode::sample_set: return "sample_set";
  }
  return "unknown";
}

ParamPlan plan_parameters(std::uint64_t L, double delta, const PlanConstants& k,
                          InversionMode mode_hint) {
  if (L == 0) throw std::invalid_argument("domain size must be positive");
  check_delta(delta);
  ParamPlan plan;
  plan.delta = delta;
  plan.constants = k;
  const double l = static_cast<double>(L);
  const double lg = std::max(1.0, std::log2(l));

  if (mode_hint == InversionMode::full_inverse) return plan;

  if (mode_hint == InversionMode::classic_fn) {
    if (delta == 0) return plan;
    const std::uint64_t h = ceil_count(k.c_g * std::pow(l, 1 - delta / 3));
    if (h >= L) return plan;
    plan.mode = InversionMode::classic_fn;
    plan.g = h;
    plan.t = ceil_count(k.c_t * std::pow(l, delta / 3));
    plan.s = ceil_count(k.c_s * std::pow(l, 1 - delta));
    plan.r = ceil_count(k.c_r * std::pow(l, 2 * delta / 3) * lg);
    return plan;
  }

  if (delta <= 0.5) return plan;
  plan.mode = InversionMode::sample_set;
  plan.g = std::min(L, ceil_count(k.c_g * std::pow(l, delta)));
  plan.t = ceil_count(k.c_t * std::pow(l, delta - 0.5));
  plan.s = ceil_count(k.c_s * std::pow(l, 1 - delta));
  plan.r = ceil_count(k.c_r * std::sqrt(l) * lg);
  return plan;
}

std::uint64_t query_eval_budget(const ParamPlan& plan) noexcept {
  switch (plan.mode) {
    case InversionMode::full_inverse: return 1;
    case InversionMode::classic_fn: return 1 + 2 * kRewalkFactor * plan.r * plan.t;
    case InversionMode::sample_set: return plan.g + 1 + 2 * kRewalkFactor * plan.r * plan.t;
  }
  return 0;
}

std::vector<std::uint64_t> build_sample_set(std::uint64_t sample_seed, std::uint64_t g,
                                            std::uint64_t domain) {
  if (g > domain) throw std::invalid_argument("sample larger than domain");
  std::vector<std::uint64_t> out(g);
  if (g > 0) kernels::splitmix_reduce(derive_key(sample_seed, kSampleLabel), 0, domain, out);
  return out;
}

std::uint64_t bypass_image(const ImageDictionary& blocked, std::uint64_t bypass_seed,
                           std::uint64_t x, std::uint64_t y, std::uint64_t range) {
  if (blocked.empty() || !blocked.contains(y)) return y;
  if (blocked.size() >= range) throw std::invalid_argument("blocked set covers the whole range");
  const std::uint64_t key = derive_key(bypass_seed, x);
  for (std::uint64_t c = 0;; ++c) {
    const std::uint64_t v = reduce(splitmix_at(key, c), range);
    if (!blocked.contains(v)) return v;
  }
}

std::uint64_t bypassed_eval(const FunctionSpec& f, const ImageDictionary& blocked,
                            std::uint64_t bypass_seed, std::uint64_t x) {
  return bypass_image(blocked, bypass_seed, x, f(x), f.range_size());
}

std::uint64_t chain_step(const FunctionSpec& f, const ImageDictionary& blocked,
                         const MixKey& mix, std::uint64_t bypass_seed, std::uint64_t x) {
  return mix(bypassed_eval(f, blocked, bypass_seed, x), f.domain_size());
}

std::vector<ChainPair> build_chains(const FunctionSpec& f, const ParamPlan& plan,
                                    const ImageDictionary& blocked, const TableSeeds& seeds) {
  if (plan.mode == InversionMode::full_inverse)
    throw std::invalid_argument("full_inverse plans have no tables");
  if (f.domain_size() > (1ULL << 32)) throw std::invalid_argument("domain exceeds 2^32");

  std::vector<ChainPair> chains(plan.r * plan.s);
  std::vector<std::uint64_t> starts(plan.s);
  for (std::uint64_t i = 0; i < plan.r; ++i) {
    const MixKey mix(seeds.mix_seed, i);
    kernels::splitmix_reduce(derive_key(seeds.start_seed, i), 0, f.domain_size(), starts);
    ChainPair* block = chains.data() + i * plan.s;
    for (std::uint64_t c = 0; c < plan.s; ++c) {
      std::uint64_t x = starts[c];
      for (std::uint64_t step = 0; step < plan.t; ++step)
        x = chain_step(f, blocked, mix, seeds.bypass_seed, x);
      block[c] = {static_cast<std::uint32_t>(starts[c]), static_cast<std::uint32_t>(x)};
    }
    std::sort(block, block + plan.s, [](const ChainPair& a, const ChainPair& b) {
      return a.end != b.end ? a.end < b.end : a.start < b.start;
    });
  }
  return chains;
}

std::vector<HellmanTable> build_tables(const FunctionSpec& f, const ParamPlan& plan,
                                       const ImageDictionary& blocked, const TableSeeds& seeds) {
  const std::vector<ChainPair> chains = build_chains(f, plan, blocked, seeds);
  std::vector<HellmanTable> tables(plan.r);
  for (std::uint64_t i = 0; i < plan.r; ++i) {
    tables[i].table_index = static_cast<std::uint32_t>(i);
    tables[i].pairs.assign(chains.begin() + i * plan.s, chains.begin() + (i + 1) * plan.s);
  }
  return tables;
}

SharedSeeds expand_shared_seed(std::uint64_t shared_seed) noexcept {
  return {derive_key(shared_seed, kSampleLabel), derive_key(shared_seed, kBypassLabel),
          derive_key(shared_seed, kMixLabel)};
}

void InversionAdvice::finalize() {
  heavy_lookup.clear(heavy_images.size());
  for (const ImagePair& p : heavy_images) heavy_lookup.insert(p.image, p.preimage);
  bit_size = inversion_bits(*this);
}

InversionAdvice preprocess_inversion(const FunctionSpec& f, const ParamPlan& plan,
                                     std::uint64_t shared_seed) {
  return preprocess_inversion(f, plan, shared_seed, derive_key(shared_seed, kStartLabel));
}

InversionAdvice preprocess_inversion(const FunctionSpec& f, const ParamPlan& plan,
                                     std::uint64_t shared_seed, std::uint64_t start_seed) {
  if (f.domain_size() > (1ULL << 32) || f.range_size() > (1ULL << 32))
    throw std::invalid_argument("inversion supports domain and range up to 2^32");
  InversionAdvice advice;
  advice.plan = plan;
  advice.domain_size = f.domain_size();
  advice.range_size = f.range_size();
  const SharedSeeds seeds = expand_shared_seed(shared_seed);
  advice.sample_seed = seeds.sample_seed;
  advice.bypass_seed = seeds.bypass_seed;
  advice.mix_seed = seeds.mix_seed;

  switch (plan.mode) {
    case InversionMode::full_inverse: {
      std::vector<std::uint64_t> all(f.domain_size());
      for (std::uint64_t x = 0; x < all.size(); ++x) all[x] = x;
      advice.full_inverse = image_pairs(f, all);
      break;
    }
    case InversionMode::classic_fn: {
      const auto points = build_sample_set(advice.sample_seed, plan.g, f.domain_size());
      advice.heavy_images = image_pairs(f, points);
      ImageDictionary blocked(advice.heavy_images.size());
      for (const ImagePair& p : advice.heavy_images) blocked.insert(p.image, p.preimage);
      advice.chains = build_chains(f, plan, blocked,
                                   {advice.mix_seed, advice.bypass_seed, start_seed});
      break;
    }
    case InversionMode::sample_set: {
      const auto points = build_sample_set(advice.sample_seed, plan.g, f.domain_size());
      ImageDictionary blocked(points.size());
      for (std::uint64_t x : points) blocked.insert(f(x), x);
      advice.chains = build_chains(f, plan, blocked,
                                   {advice.mix_seed, advice.bypass_seed, start_seed});
      break;
    }
  }
  advice.finalize();
  return advice;
}

std::optional<std::uint64_t> invert(const InversionAdvice& advice, const FunctionSpec& f,
                                    std::uint64_t y) {
  if (y >= f.range_size()) return std::nullopt;
  const ParamPlan& plan = advice.plan;

  if (plan.mode == InversionMode::full_inverse) {
    const auto x = lookup_image(advice.full_inverse, y);
    if (x && f(*x) == y) return x;
    return std::nullopt;
  }

  EvalBudget budget(f, query_eval_budget(plan));
  ImageDictionary sampled;
  const ImageDictionary* blocked = &advice.heavy_lookup;

  if (plan.mode == InversionMode::classic_fn) {
    if (const auto x = lookup_image(advice.heavy_images, y)) {
      if (f(*x) == y) return x;
    }
  } else {
    const auto points = build_sample_set(advice.sample_seed, plan.g, f.domain_size());
    sampled.clear(points.size());
    for (std::uint64_t x : points) {
      const std::uint64_t image = f(x);
      if (image == y) return x;
      sampled.insert(image, x);
    }
    blocked = &sampled;
  }

  const std::uint64_t L = f.domain_size();
  for (std::uint64_t i = 0; i < plan.r; ++i) {
    const auto pairs = advice.table(i);
    const MixKey mix(advice.mix_seed, i);
    std::uint64_t cur = mix(y, L);
    for (std::uint64_t u = 0; u < plan.t; ++u) {
      std::size_t k = lower_bound_end(pairs, cur);
      for (; k < pairs.size() && pairs[k].end == cur; ++k) {
        cost::add_probes(2);
        // The target sits t-1-u steps after the start if this is not a false alarm.
        std::uint64_t x = pairs[k].start;
        for (std::uint64_t step = 0; step + u < plan.t; ++step) {
          if (budget.exhausted()) return std::nullopt;
          const std::uint64_t image = f(x);
          if (image == y) return x;
          x = mix(bypass_image(*blocked, advice.bypass_seed, x, image, f.range_size()), L);
        }
      }
      if (u + 1 == plan.t) break;
      if (budget.exhausted()) return std::nullopt;
      cur = chain_step(f, *blocked, mix, advice.bypass_seed, cur);
    }
  }
  return std::nullopt;
}

InversionAdvice classic_fn_mode(const FunctionSpec& f, double delta, std::uint64_t shared_seed,
                                const PlanConstants& constants) {
  const ParamPlan plan =
      plan_parameters(f.domain_size(), delta, constants, InversionMode::classic_fn);
  return preprocess_inversion(f, plan, shared_seed);
}

}  // namespace sumindex
