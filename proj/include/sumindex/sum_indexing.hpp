#pragma once

// 3SUM-Indexing through the sub-function framework, and kSUM on top of it by
// taking B to be the (k-2)-fold sumset of A.
//
// Outer function f(i*m + j) = a_i + b_j on [n*m] -> [N'].
// Sub-functions, one per residue d mod q:
//   f_d(i) = (a_i + b_j) mod p for the least j with a_i + b_j = d (mod q),
//            z when no such j exists.
// map1(y) = y mod q, map2(y) = y mod p, translate(y, i) = (i, j) for the
// least j with b_j = y - a_i, or (0, 0).

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sumindex/framework.hpp"
#include "sumindex/instance.hpp"
#include "sumindex/number_theory.hpp"
#include "sumindex/rng.hpp"

namespace sumindex {

struct ValueIndex {
  std::uint64_t value;
  std::uint32_t index;

  friend bool operator==(const ValueIndex&, const ValueIndex&) = default;
};

struct ResidueEntry {
  std::uint64_t residue;
  std::uint64_t value;
  std::uint32_t j;

  friend bool operator==(const ResidueEntry&, const ResidueEntry&) = default;
};

/// Elements of an unbalanced 3SUM instance. B may be a derived sumset.
struct SumInput {
  std::vector<std::uint64_t> A;
  std::vector<std::uint64_t> B;
  std::uint64_t M = 0;        // bound used for the prime intervals
  std::uint64_t max_sum = 0;  // largest possible a + b; outer range is max_sum + 1
};

struct Aux3Sum {
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  std::uint64_t z = 0;
  std::vector<std::uint64_t> A;             // input order; f_d is indexed by i
  std::vector<ValueIndex> sorted_B;         // by value, then j
  std::vector<ResidueEntry> B_by_mod_q;     // by residue, then j

  std::vector<std::uint8_t> serialize(std::uint64_t max_value) const;
  static Aux3Sum parse(std::span<const std::uint8_t> bytes);

  friend bool operator==(const Aux3Sum&, const Aux3Sum&) = default;
};

Aux3Sum build_aux_3sum(std::span<const std::uint64_t> A, std::span<const std::uint64_t> B,
                       std::uint64_t p, std::uint64_t q, std::uint64_t z);

/// Reference f_d by binary search over B_by_mod_q.
std::uint64_t eval_fd_3sum(const Aux3Sum& aux, std::uint64_t d, std::uint64_t i);
/// (y mod q, y mod p).
std::pair<std::uint64_t, std::uint64_t> map_3sum(std::uint64_t y, std::uint64_t p,
                                                 std::uint64_t q);
/// (i, least j with b_j = y - a_i), or (0, 0) on a miss.
std::pair<std::uint64_t, std::uint64_t> translate_3sum(const Aux3Sum& aux, std::uint64_t y,
                                                       std::uint64_t i);

class SumDecomposition final : public Decomposition {
 public:
  SumDecomposition(std::shared_ptr<const SumInput> input, Aux3Sum aux);

  /// p from prime_interval(n, M, c), q from prime_interval(m, M, c), z in [p].
  static SumDecomposition sample(std::shared_ptr<const SumInput> input, double c, Rng& rng);

  const Aux3Sum& aux() const noexcept { return aux_; }
  const SumInput& input() const noexcept { return *input_; }

  std::uint64_t sub_count() const override { return aux_.q; }
  std::uint64_t sub_domain() const override { return input_->A.size(); }
  std::uint64_t sub_range() const override { return aux_.p; }
  std::uint64_t outer_domain() const override { return input_->A.size() * input_->B.size(); }
  std::uint64_t outer_range() const override { return input_->max_sum + 1; }

  std::uint64_t eval_fd(std::uint64_t d, std::uint64_t i) const override;
  std::uint64_t map1(std::uint64_t y) const override;
  std::uint64_t map2(std::uint64_t y) const override;
  std::uint64_t translate(std::uint64_t y, std::uint64_t i) const override;
  std::uint64_t eval_outer(std::uint64_t x) const override;
  std::vector<std::uint8_t> aux_bytes() const override;

 private:
  // first position in B_by_mod_q with the given residue, or npos
  std::size_t residue_start(std::uint64_t residue) const;

  std::shared_ptr<const SumInput> input_;
  Aux3Sum aux_;
  std::vector<std::uint32_t> class_start_;  // dense index over [q] when q is small
  unsigned search_probes_ = 0;
};

/// All (k-2)-element index tuples over A, with their sums (or XORs), sorted
/// by value; equal values keep lexicographic tuple order.
struct WitnessedSumset {
  unsigned arity = 0;                     // k - 2
  std::vector<std::uint64_t> values;
  std::vector<std::uint32_t> witnesses;   // arity entries per element

  std::span<const std::uint32_t> witness(std::uint64_t j) const {
    return std::span<const std::uint32_t>(witnesses).subspan(j * arity, arity);
  }
  std::uint64_t size() const noexcept { return values.size(); }
};

inline constexpr std::uint64_t kDefaultSumsetBudget = 1ULL << 26;

/// Throws BudgetExceeded when n^(k-2) > budget.
WitnessedSumset build_ksum_sumset(std::span<const std::uint64_t> A, unsigned k,
                                  std::uint64_t budget = kDefaultSumsetBudget);

// ---- top-level index over any instance kind --------------------------------

struct IndexConfig {
  double delta = 0.75;
  double prime_constant = kDefaultPrimeConstant;
  PlanConstants constants{};
  InversionMode mode = InversionMode::sample_set;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  unsigned xor_extra_bits = 3;  // p = ceil(log2 n) + extra, q = ceil(log2 m) + extra
  std::uint64_t sumset_budget = kDefaultSumsetBudget;
};

/// A weak copy that carries framework advice (or a full answer table).
class IndexCopy : public WeakInverter {
 public:
  virtual std::vector<std::uint8_t> serialize() const = 0;
  virtual bool is_table() const noexcept { return false; }
};

/// Complete answer table: entry y holds x + 1 for some preimage x, or 0.
class AnswerTable final : public IndexCopy {
 public:
  AnswerTable(std::vector<std::uint64_t> entries, std::uint64_t N);
  static AnswerTable parse(std::span<const std::uint8_t> bytes);

  std::optional<std::uint64_t> query(std::uint64_t y, QueryStats* stats) const override;
  std::uint64_t advice_bits() const override;
  std::vector<std::uint8_t> serialize() const override;
  bool is_table() const noexcept override { return true; }

 private:
  std::vector<std::uint64_t> entries_;
  std::uint64_t N_;
};

class Index {
 public:
  /// Copies are built lazily on first use.
  static Index build(const Instance& inst, const IndexConfig& config);

  const Instance& instance() const noexcept;
  const IndexConfig& config() const noexcept;
  bool trivial() const noexcept;
  std::uint64_t ell() const noexcept;
  std::uint64_t outer_domain() const noexcept;
  std::uint64_t outer_range() const noexcept;

  /// Index tuple whose value is y (verified), or nothing.
  std::optional<std::vector<std::uint64_t>> query(std::uint64_t y, QueryStats* stats = nullptr);

  /// Every query answered with one copy resident at a time.
  std::vector<std::optional<std::vector<std::uint64_t>>> query_streamed(
      std::span<const std::uint64_t> ys, StreamedResult* info = nullptr) const;

  AmplifiedAdvice& amplified();
  const WeakBuilder& builder() const;
  /// The copy_index-th weak copy, built afresh.
  std::unique_ptr<IndexCopy> make_copy(std::uint64_t copy_index) const;

  /// Converts an outer preimage x in [n*m] to an answer tuple.
  std::vector<std::uint64_t> decode(std::uint64_t x) const;

  std::uint64_t witness_bits() const;
  /// Witnesses plus all copies built so far.
  std::uint64_t advice_bits() const;

  // used by the advice file reader
  struct State;
  explicit Index(std::shared_ptr<State> state);
  State& state() { return *state_; }
  const State& state() const { return *state_; }

 private:
  std::shared_ptr<State> state_;
};

/// Convenience wrappers.
Index preprocess_3sum(std::span<const std::uint64_t> A, std::span<const std::uint64_t> B,
                      std::uint64_t M, const IndexConfig& config);
std::optional<std::pair<std::uint64_t, std::uint64_t>> query_3sum(Index& index, std::uint64_t y,
                                                                   QueryStats* stats = nullptr);
Index preprocess_ksum(std::span<const std::uint64_t> A, unsigned k, std::uint64_t M,
                      const IndexConfig& config);
std::optional<std::vector<std::uint64_t>> query_ksum(Index& index, std::uint64_t b,
                                                     QueryStats* stats = nullptr);

}  // namespace sumindex
