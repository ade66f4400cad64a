#pragma once

// The acceptance suite as library calls, shared by the test binary and the
// verify subcommand.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumindex/inversion.hpp"
#include "sumindex/number_theory.hpp"

namespace sumindex::acceptance {

// Benchmark-grade profile used by the scaling criteria. The analysis-grade
// prime constant (50) makes D hundreds of times larger than m at these n.
inline constexpr double kBenchmarkPrimeConstant = 1.0 / 16;
// Exhaustive correctness runs are small enough for c = 1.
inline constexpr double kCorrectnessPrimeConstant = 1.0;
inline constexpr PlanConstants kBenchmarkConstants{1.0, 1.0, 1.0, 0.125};
inline constexpr PlanConstants kInversionConstants{1.0, 1.0, 1.0, 0.25};
inline constexpr std::uint64_t kSweepM = 1ULL << 24;

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;  // one line
  nlohmann::ordered_json metrics;
  double seconds = 0;
};

/// Scale knobs. Defaults are the full acceptance sizes.
struct Options {
  double scale = 1.0;           // multiplies run and seed counts, never below 1
  unsigned threads = 0;
  std::uint64_t sieve_max = kDefaultSieveMax;
  std::function<void(const std::string&)> log;  // progress lines, may be empty
};

Result exhaustive_3sum(const Options& opt);       // 1
Result fd_oracle(const Options& opt);             // 2
Result tradeoff_slope(const Options& opt);        // 3
Result figure_point(const Options& opt);          // 4
Result inversion_modes(const Options& opt);       // 5
Result prime_constants(const Options& opt);       // 6
Result amplification(const Options& opt);         // 7
Result ksum_exhaustive(const Options& opt);       // 8
Result kxor_sweep(const Options& opt);            // 9
Result preprocess_time(const Options& opt);       // 10

struct Criterion {
  int id;
  const char* key;
  Result (*run)(const Options&);
};
const std::vector<Criterion>& criteria();

/// Runs the listed ids (all when empty) in order.
std::vector<Result> run(const std::vector<int>& ids, const Options& opt);

std::string format_line(const Result& r);

}  // namespace sumindex::acceptance
