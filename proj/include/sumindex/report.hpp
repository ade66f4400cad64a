#pragma once

// CostReport: the measured S and T of one run, with the configuration echoed
// so benchmark-grade runs (scaled prime constants) stay distinguishable.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>
#include "sumindex/inversion.hpp"
#include "sumindex/oracle.hpp"
#include "sumindex/sum_indexing.hpp"

namespace sumindex {

struct RunEcho {
  std::string mode;  // 3sum, ksum, kxor, invert, baseline
  std::string variant;
  std::string profile;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  unsigned k = 3;
  unsigned ell_bits = 0;
  std::uint64_t M = 0;
  double delta = 0;
  double prime_constant = 0;
  PlanConstants constants{};
  std::uint64_t seed = 0;
};

struct CostReport {
  RunEcho config;
  std::uint64_t advice_bits = 0;   // unpadded
  std::uint64_t advice_bytes = 0;  // serialized, with padding; 0 if not serialized
  std::uint64_t copies = 0;        // copies the advice_bits cover
  std::uint64_t ell = 0;
  std::uint64_t preprocess_evals = 0;
  double preprocess_seconds = 0;
  double query_seconds = 0;
  std::vector<std::uint64_t> probes_per_query;
  std::vector<std::uint64_t> evals_per_query;
  std::uint64_t queries = 0;
  std::uint64_t members = 0;          // per oracle; equals queries when unknown
  std::uint64_t answered = 0;
  std::uint64_t false_positives = 0;  // answers the oracle recomputation rejects

  double success_rate() const noexcept;
  double median_evals() const;
  double median_probes() const;
};

double median(std::vector<std::uint64_t> v);
double median(std::vector<double> v);

nlohmann::ordered_json to_json(const CostReport& r);

inline constexpr int kCsvSchemaVersion = 1;
std::string csv_header();
std::string csv_row(const CostReport& r);

/// Least-squares slope of ys against xs.
double fit_slope(std::span<const double> xs, std::span<const double> ys);

/// One weak copy of an index: builds it, queries every y through it.
/// advice_bits covers that copy plus the witness section.
CostReport measure_weak_copy(const Index& index, std::span<const std::uint64_t> queries,
                             const OracleTable* oracle, std::uint64_t copy_index = 0);

/// Amplified queries with every copy resident (built on demand).
CostReport measure_amplified(Index& index, std::span<const std::uint64_t> queries,
                             const OracleTable* oracle);

RunEcho echo_of(const Index& index, const std::string& mode);

}  // namespace sumindex
