#pragma once

// Sub-function decomposition: f on [N] -> [N'] is split into D functions
// f_d on [L] -> [L'] that are inverted independently. A query y goes to
// f_{map1(y)} at map2(y); a preimage x' there becomes translate(y, x'),
// which is kept only if the outer function really sends it to y.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sumindex/function_spec.hpp"
#include "sumindex/inversion.hpp"

namespace sumindex {

class Decomposition {
 public:
  virtual ~Decomposition() = default;

  virtual std::uint64_t sub_count() const = 0;     // D
  virtual std::uint64_t sub_domain() const = 0;    // L
  virtual std::uint64_t sub_range() const = 0;     // L'
  virtual std::uint64_t outer_domain() const = 0;  // N
  virtual std::uint64_t outer_range() const = 0;   // N'

  virtual std::uint64_t eval_fd(std::uint64_t d, std::uint64_t x) const = 0;
  virtual std::uint64_t map1(std::uint64_t y) const = 0;
  virtual std::uint64_t map2(std::uint64_t y) const = 0;
  virtual std::uint64_t translate(std::uint64_t y, std::uint64_t x) const = 0;
  virtual std::uint64_t eval_outer(std::uint64_t x) const = 0;

  /// Serialized AUX; its length in bits is what the advice is charged.
  virtual std::vector<std::uint8_t> aux_bytes() const = 0;
};

/// f_d as a metered function.
FunctionSpec sub_function(const Decomposition& decomp, std::uint64_t d);

struct QueryStats {
  std::uint64_t evals = 0;   // sub-function plus outer evaluations
  std::uint64_t probes = 0;  // advice words read
};

struct FrameworkAdvice {
  std::uint64_t D = 0;
  std::uint64_t L = 0;
  std::uint64_t L_prime = 0;
  double delta = 0;
  std::uint64_t ell = 1;  // amplification copies this advice belongs to
  ParamPlan plan;
  std::vector<std::uint8_t> aux;
  std::uint64_t shared_seed = 0;
  std::uint64_t seed_expansion_bits = 0;  // declared length of the expanded string
  std::vector<InversionAdvice> per_d;
  std::uint64_t total_bits = 0;           // unpadded serialized size

  std::uint64_t preprocess_evals = 0;     // not serialized

  /// Recomputes total_bits from the parts.
  void account();
};

inline constexpr std::uint64_t kDefaultEvalBudget = 1ULL << 36;

struct FrameworkOptions {
  double delta = 0.75;
  PlanConstants constants{};
  InversionMode mode = InversionMode::sample_set;
  std::uint64_t shared_seed = 0;
  std::uint64_t start_seed = 0;  // private; chain starts of f_d use derive_key(start_seed, d)
  unsigned threads = 0;          // 0: read SUMINDEX_THREADS, default 1
  std::uint64_t eval_budget = kDefaultEvalBudget;  // BudgetExceeded above this estimate
};

FrameworkAdvice preprocess_framework(const Decomposition& decomp, const FrameworkOptions& options);

std::optional<std::uint64_t> query_framework(const FrameworkAdvice& advice,
                                             const Decomposition& decomp, std::uint64_t y,
                                             QueryStats* stats = nullptr);

/// "SFW1": header, aux, shared seed, u64 offset index, per-d section blobs.
std::vector<std::uint8_t> serialize_framework(const FrameworkAdvice& advice);
FrameworkAdvice deserialize_framework(std::span<const std::uint8_t> bytes);
/// Reads only the entry for sub-function d through the offset index.
InversionAdvice read_framework_entry(std::span<const std::uint8_t> bytes, std::uint64_t d);

unsigned worker_threads(unsigned requested = 0);

// ---- amplification ---------------------------------------------------------

/// ceil(log2(N * N')), at least 1.
std::uint64_t amplification_copies(std::uint64_t N, std::uint64_t N_prime);

/// One independently seeded weak algorithm. query() must only return
/// answers it has verified.
class WeakInverter {
 public:
  virtual ~WeakInverter() = default;
  virtual std::optional<std::uint64_t> query(std::uint64_t y, QueryStats* stats) const = 0;
  virtual std::uint64_t advice_bits() const = 0;
  virtual std::uint64_t preprocess_evals() const { return 0; }
};

using WeakBuilder = std::function<std::unique_ptr<WeakInverter>(std::uint64_t copy_index)>;

/// ell copies, built on first use. Queries try copies in order and return the
/// first answer. Not thread-safe while copies are still being built.
class AmplifiedAdvice {
 public:
  AmplifiedAdvice(WeakBuilder builder, std::uint64_t ell);

  std::uint64_t ell() const noexcept { return ell_; }
  std::uint64_t built() const noexcept;
  const WeakInverter& copy(std::uint64_t k);
  void build_all();

  std::optional<std::uint64_t> query(std::uint64_t y, QueryStats* stats = nullptr);

  /// Sum over the copies built so far.
  std::uint64_t advice_bits() const;
  std::uint64_t preprocess_evals() const;

 private:
  WeakBuilder builder_;
  std::uint64_t ell_;
  std::vector<std::unique_ptr<WeakInverter>> copies_;
};

struct StreamedResult {
  std::vector<std::optional<std::uint64_t>> answers;
  std::vector<QueryStats> stats;          // per query, summed over the copies tried
  std::uint64_t copies_built = 0;
  std::uint64_t max_copy_bits = 0;
  std::uint64_t preprocess_evals = 0;
};

/// Same answers as AmplifiedAdvice::query on every y, but holds one copy at a
/// time: copy k is built, asked every still-unanswered query, then dropped.
StreamedResult query_streamed(const WeakBuilder& builder, std::uint64_t ell,
                              std::span<const std::uint64_t> queries);

}  // namespace sumindex
