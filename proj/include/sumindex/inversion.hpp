#pragma once

// Generic function inversion with Hellman chain tables.
//
// Three modes share one advice type:
//   full_inverse  one stored preimage per image; used whenever the space
//                 budget reaches the domain size.
//   classic_fn    stored heavy-image dictionary of roughly S sampled points
//                 plus tables built over the bypassed function.
//   sample_set    the sampled dictionary is not stored: preprocessing and
//                 every query regenerate it from a shared seed.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sumindex/function_spec.hpp"
#include "sumindex/image_dictionary.hpp"
#include "sumindex/mixing.hpp"

namespace sumindex {

enum class InversionMode : std::uint8_t { full_inverse = 0, classic_fn = 1, sample_set = 2 };

const char* mode_name(InversionMode mode) noexcept;

struct PlanConstants {
  double c_g = 1.0;
  double c_t = 1.0;
  double c_s = 1.0;
  double c_r = 1.0;

  friend bool operator==(const PlanConstants&, const PlanConstants&) = default;
};

struct ParamPlan {
  InversionMode mode = InversionMode::full_inverse;
  std::uint64_t g = 0;  // sample size (sample_set) or heavy-store size (classic_fn)
  std::uint64_t t = 0;  // chain length
  std::uint64_t s = 0;  // chains per table
  std::uint64_t r = 0;  // number of tables
  double delta = 0.0;
  PlanConstants constants{};

  friend bool operator==(const ParamPlan&, const ParamPlan&) = default;
};

/// Chooses g, t, s, r for a domain of size `domain_size`.
///
/// sample_set: g = ceil(c_g L^d), t = ceil(c_t L^(d-1/2)), s = ceil(c_s L^(1-d)),
///             r = ceil(c_r sqrt(L) log2 L); full_inverse when d <= 1/2.
/// classic_fn: g = ceil(c_g L^(1-d/3)), t = ceil(c_t L^(d/3)), s = ceil(c_s L^(1-d)),
///             r = ceil(c_r L^(2d/3) log2 L); full_inverse when d == 0 or g >= L.
///
/// Throws std::invalid_argument for L == 0 or delta outside [0, 1].
ParamPlan plan_parameters(std::uint64_t domain_size, double delta,
                          const PlanConstants& constants = {},
                          InversionMode mode_hint = InversionMode::sample_set);

/// Upper bound on evaluator calls a single invert() may spend: the sample
/// regeneration plus the walk and re-walk allowance across all tables.
std::uint64_t query_eval_budget(const ParamPlan& plan) noexcept;
inline constexpr std::uint64_t kRewalkFactor = 2;

/// g points of [domain) drawn from the splitmix stream keyed by seed.
/// Duplicates are allowed. Throws if g > domain.
std::vector<std::uint64_t> build_sample_set(std::uint64_t sample_seed, std::uint64_t g,
                                            std::uint64_t domain);

/// y = f(x) passed through the bypass rule without evaluating f.
std::uint64_t bypass_image(const ImageDictionary& blocked, std::uint64_t bypass_seed,
                           std::uint64_t x, std::uint64_t y, std::uint64_t range);

/// f(x) unless f(x) is blocked; blocked images are replaced by a counter-salted
/// pseudorandom value of the range that is itself not blocked.
std::uint64_t bypassed_eval(const FunctionSpec& f, const ImageDictionary& blocked,
                            std::uint64_t bypass_seed, std::uint64_t x);

struct ChainPair {
  std::uint32_t start;
  std::uint32_t end;

  friend bool operator==(const ChainPair&, const ChainPair&) = default;
};

struct HellmanTable {
  std::uint32_t table_index = 0;
  std::vector<ChainPair> pairs;  // sorted by (end, start)

  friend bool operator==(const HellmanTable&, const HellmanTable&) = default;
};

struct ImagePair {
  std::uint32_t image;
  std::uint32_t preimage;

  friend bool operator==(const ImagePair&, const ImagePair&) = default;
};

struct TableSeeds {
  std::uint64_t mix_seed = 0;
  std::uint64_t bypass_seed = 0;
  std::uint64_t start_seed = 0;
};

/// Node x_{k+1} = h_i(bypassed f(x_k)) of a chain in table i.
std::uint64_t chain_step(const FunctionSpec& f, const ImageDictionary& blocked,
                         const MixKey& mix, std::uint64_t bypass_seed, std::uint64_t x);

/// Builds plan.r tables of plan.s chains of plan.t steps each.
std::vector<HellmanTable> build_tables(const FunctionSpec& f, const ParamPlan& plan,
                                       const ImageDictionary& blocked, const TableSeeds& seeds);

/// Same chains as build_tables, laid out as r consecutive sorted blocks of s.
std::vector<ChainPair> build_chains(const FunctionSpec& f, const ParamPlan& plan,
                                    const ImageDictionary& blocked, const TableSeeds& seeds);

struct InversionAdvice {
  ParamPlan plan;
  std::uint64_t domain_size = 0;
  std::uint64_t range_size = 0;
  std::vector<ChainPair> chains;          // classic_fn, sample_set: r blocks of s
  std::vector<ImagePair> full_inverse;    // full_inverse, sorted by image
  std::vector<ImagePair> heavy_images;    // classic_fn, sorted by image
  std::uint64_t sample_seed = 0;
  std::uint64_t bypass_seed = 0;
  std::uint64_t mix_seed = 0;
  std::uint64_t bit_size = 0;             // unpadded serialized size

  /// heavy_images as a lookup set; rebuilt by finalize(), not serialized.
  ImageDictionary heavy_lookup;

  /// Rebuilds derived lookup state and bit_size.
  void finalize();

  std::span<const ChainPair> table(std::uint64_t i) const {
    return std::span<const ChainPair>(chains).subspan(i * plan.s, plan.s);
  }
  HellmanTable table_copy(std::uint64_t i) const {
    const auto t = table(i);
    return {static_cast<std::uint32_t>(i), std::vector<ChainPair>(t.begin(), t.end())};
  }

  friend bool operator==(const InversionAdvice& a, const InversionAdvice& b) {
    return a.plan == b.plan && a.domain_size == b.domain_size && a.range_size == b.range_size &&
           a.chains == b.chains && a.full_inverse == b.full_inverse &&
           a.heavy_images == b.heavy_images && a.sample_seed == b.sample_seed &&
           a.bypass_seed == b.bypass_seed && a.mix_seed == b.mix_seed &&
           a.bit_size == b.bit_size;
  }
};

/// Seeds derived from one shared string; identical for every sub-function
/// that uses the same shared seed.
struct SharedSeeds {
  std::uint64_t sample_seed;
  std::uint64_t bypass_seed;
  std::uint64_t mix_seed;
};
SharedSeeds expand_shared_seed(std::uint64_t shared_seed) noexcept;

/// `start_seed` is private preprocessing randomness for chain start points;
/// it is not needed online.
InversionAdvice preprocess_inversion(const FunctionSpec& f, const ParamPlan& plan,
                                     std::uint64_t shared_seed, std::uint64_t start_seed);
InversionAdvice preprocess_inversion(const FunctionSpec& f, const ParamPlan& plan,
                                     std::uint64_t shared_seed);

/// Returns x with f(x) == y, or nothing. Never returns an unverified x.
std::optional<std::uint64_t> invert(const InversionAdvice& advice, const FunctionSpec& f,
                                    std::uint64_t y);

/// classic_fn plan at `delta`, preprocessed.
InversionAdvice classic_fn_mode(const FunctionSpec& f, double delta, std::uint64_t shared_seed,
                                const PlanConstants& constants = {});

}  // namespace sumindex
