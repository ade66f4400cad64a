#pragma once

// kXOR-Indexing: the 3SUM construction with residues replaced by random
// full-rank GF(2) maps. P (p x ell) plays the role of "mod p", Q (q x ell)
// the role of "mod q".
//   f_d(i) = P(a_i ^ b_j) for the least j with Q(a_i ^ b_j) = d, else z
//   map1(y) = Qy, map2(y) = Py, translate(y, i) = (i, least j with b_j = a_i ^ y)

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sumindex/framework.hpp"
#include "sumindex/number_theory.hpp"
#include "sumindex/sum_indexing.hpp"

namespace sumindex {

struct XorInput {
  std::vector<std::uint64_t> A;
  std::vector<std::uint64_t> B;
  unsigned ell_bits = 0;
};

struct AuxKXor {
  F2Matrix P;
  F2Matrix Q;
  std::uint64_t z = 0;                    // in F_2^p
  std::vector<std::uint64_t> A;           // input order
  std::vector<ValueIndex> sorted_B;       // by value, then j
  std::vector<ResidueEntry> B_by_Q;       // residue = Q b_j; by residue, then j

  unsigned p() const noexcept { return P.rows(); }
  unsigned q() const noexcept { return Q.rows(); }

  std::vector<std::uint8_t> serialize() const;
  static AuxKXor parse(std::span<const std::uint8_t> bytes);

  friend bool operator==(const AuxKXor&, const AuxKXor&) = default;
};

AuxKXor build_aux_kxor(std::span<const std::uint64_t> A, std::span<const std::uint64_t> B,
                       F2Matrix P, F2Matrix Q, std::uint64_t z);

/// Reference f_d by binary search over B_by_Q.
std::uint64_t eval_fd_kxor(const AuxKXor& aux, std::uint64_t d, std::uint64_t i);

/// True when ell_bits < ceil(1.5 log2 n) and the full answer table is used.
bool kxor_uses_table(std::uint64_t n, unsigned ell_bits);

/// (p, q) = (ceil(log2 n) + extra, ceil(log2 m) + extra), each capped at ell.
std::pair<unsigned, unsigned> kxor_dimensions(std::uint64_t n, std::uint64_t m, unsigned ell_bits,
                                              unsigned extra_bits = 3);

class XorDecomposition final : public Decomposition {
 public:
  XorDecomposition(std::shared_ptr<const XorInput> input, AuxKXor aux);

  static XorDecomposition sample(std::shared_ptr<const XorInput> input, unsigned extra_bits,
                                 Rng& rng);

  const AuxKXor& aux() const noexcept { return aux_; }

  std::uint64_t sub_count() const override { return 1ULL << aux_.q(); }
  std::uint64_t sub_domain() const override { return input_->A.size(); }
  std::uint64_t sub_range() const override { return 1ULL << aux_.p(); }
  std::uint64_t outer_domain() const override { return input_->A.size() * input_->B.size(); }
  std::uint64_t outer_range() const override { return 1ULL << input_->ell_bits; }

  std::uint64_t eval_fd(std::uint64_t d, std::uint64_t i) const override;
  std::uint64_t map1(std::uint64_t y) const override;
  std::uint64_t map2(std::uint64_t y) const override;
  std::uint64_t translate(std::uint64_t y, std::uint64_t i) const override;
  std::uint64_t eval_outer(std::uint64_t x) const override;
  std::vector<std::uint8_t> aux_bytes() const override;

 private:
  std::shared_ptr<const XorInput> input_;
  AuxKXor aux_;
  std::vector<std::uint64_t> Qa_, Pa_;       // per i
  std::vector<std::uint64_t> P_entry_;       // P b_j per B_by_Q entry
  std::vector<std::uint32_t> class_start_;   // over [2^q]
  std::vector<std::uint64_t> P_cols_, Q_cols_;
  unsigned search_probes_ = 0;
};

/// (k-2)-fold XOR set with witnesses; same ordering rules as the sumset.
WitnessedSumset build_kxor_set(std::span<const std::uint64_t> A, unsigned k,
                               std::uint64_t budget = kDefaultSumsetBudget);

}  // namespace sumindex
