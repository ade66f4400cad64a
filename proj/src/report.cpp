#include "sumindex/report.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "index_internal.hpp"
#include "sumindex/kernels.hpp"

namespace sumindex {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string mode_label(const IndexConfig& c) { return mode_name(c.mode); }

}  // namespace

double median(std::vector<std::uint64_t> v) {
  if (v.empty()) return 0;
  const std::size_t h = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(h), v.end());
  const double hi = static_cast<double>(v[h]);
  if (v.size() % 2) return hi;
  const double lo = static_cast<double>(*std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(h)));
  return (lo + hi) / 2;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2;
}

double CostReport::success_rate() const noexcept {
  if (members == 0) return 1.0;
  return static_cast<double>(answered - std::min(answered, false_positives)) / static_cast<double>(members);
}

double CostReport::median_evals() const { return median(evals_per_query); }
double CostReport::median_probes() const { return median(probes_per_query); }

nlohmann::ordered_json to_json(const CostReport& r) {
  nlohmann::ordered_json cfg;
  cfg["mode"] = r.config.mode;
  cfg["variant"] = r.config.variant;
  cfg["profile"] = r.config.profile;
  cfg["n"] = r.config.n;
  cfg["m"] = r.config.m;
  cfg["k"] = r.config.k;
  cfg["ell_bits"] = r.config.ell_bits;
  cfg["M"] = r.config.M;
  cfg["delta"] = r.config.delta;
  cfg["prime_constant"] = r.config.prime_constant;
  cfg["c_g"] = r.config.constants.c_g;
  cfg["c_t"] = r.config.constants.c_t;
  cfg["c_s"] = r.config.constants.c_s;
  cfg["c_r"] = r.config.constants.c_r;
  cfg["seed"] = r.config.seed;
  cfg["isa"] = std::string(kernels::isa_name(kernels::active_isa()));

  nlohmann::ordered_json j;
  j["config"] = std::move(cfg);
  j["advice_bits"] = r.advice_bits;
  j["advice_bytes"] = r.advice_bytes;
  j["copies"] = r.copies;
  j["ell"] = r.ell;
  j["preprocess_evals"] = r.preprocess_evals;
  j["wall_times"] = {{"preprocess_s", r.preprocess_seconds}, {"query_s", r.query_seconds}};
  j["queries"] = r.queries;
  j["members"] = r.members;
  j["answered"] = r.answered;
  j["false_positives"] = r.false_positives;
  j["success_rate"] = r.success_rate();
  j["median_evals"] = r.median_evals();
  j["median_probes"] = r.median_probes();
  j["probes_per_query"] = r.probes_per_query;
  j["evals_per_query"] = r.evals_per_query;
  return j;
}

std::string csv_header() {
  return "schema,mode,variant,profile,n,m,k,ell_bits,M,delta,prime_constant,c_g,c_t,c_s,c_r,seed,"
         "advice_bits,advice_bytes,copies,ell,preprocess_evals,preprocess_s,query_s,queries,"
         "members,answered,false_positives,success_rate,median_evals,median_probes";
}

std::string csv_row(const CostReport& r) {
  std::ostringstream o;
  o << std::setprecision(10);
  const RunEcho& c = r.config;
  o << kCsvSchemaVersion << ',' << c.mode << ',' << c.variant << ',' << c.profile << ',' << c.n
    << ',' << c.m << ',' << c.k << ',' << c.ell_bits << ',' << c.M << ',' << c.delta << ','
    << c.prime_constant << ',' << c.constants.c_g << ',' << c.constants.c_t << ','
    << c.constants.c_s << ',' << c.constants.c_r << ',' << c.seed << ',' << r.advice_bits << ','
    << r.advice_bytes << ',' << r.copies << ',' << r.ell << ',' << r.preprocess_evals << ','
    << r.preprocess_seconds << ',' << r.query_seconds << ',' << r.queries << ',' << r.members
    << ',' << r.answered << ',' << r.false_positives << ',' << r.success_rate() << ','
    << r.median_evals() << ',' << r.median_probes();
  return o.str();
}

double fit_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("need two or more points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0) throw std::invalid_argument("degenerate abscissae");
  return sxy / sxx;
}

RunEcho echo_of(const Index& index, const std::string& mode) {
  const Instance& inst = index.instance();
  const IndexConfig& c = index.config();
  RunEcho e;
  e.mode = mode;
  e.variant = mode_label(c);
  e.n = inst.n();
  e.m = index.state().m;
  e.k = inst.k;
  e.ell_bits = inst.ell_bits;
  e.M = inst.M;
  e.delta = c.delta;
  e.prime_constant = c.prime_constant;
  e.constants = c.constants;
  e.seed = c.seed;
  return e;
}

namespace {

void score(CostReport& r, const Index& index, std::uint64_t y,
           const std::optional<std::uint64_t>& x, const OracleTable* oracle) {
  const bool member = oracle ? oracle->query(y).member : true;
  if (member) ++r.members;
  if (!x) return;
  if (*x >= index.outer_domain() || tuple_value(index.instance(), index.decode(*x)) != y) {
    ++r.false_positives;
    return;
  }
  if (!member) {
    ++r.false_positives;
    return;
  }
  ++r.answered;
}

}  // namespace

CostReport measure_weak_copy(const Index& index, std::span<const std::uint64_t> queries,
                             const OracleTable* oracle, std::uint64_t copy_index) {
  CostReport r;
  r.config = echo_of(index, kind_name(index.instance().kind));
  r.ell = index.ell();
  r.copies = 1;
  const auto t0 = Clock::now();
  std::unique_ptr<IndexCopy> copy = index.make_copy(copy_index);
  r.preprocess_seconds = seconds_since(t0);
  r.preprocess_evals = copy->preprocess_evals();
  r.advice_bits = copy->advice_bits() + index.witness_bits();
  r.queries = queries.size();
  const auto t1 = Clock::now();
  for (std::uint64_t y : queries) {
    QueryStats st;
    std::optional<std::uint64_t> x;
    if (y < index.outer_range()) x = copy->query(y, &st);
    r.probes_per_query.push_back(st.probes);
    r.evals_per_query.push_back(st.evals);
    score(r, index, y, x, oracle);
  }
  r.query_seconds = seconds_since(t1);
  return r;
}

CostReport measure_amplified(Index& index, std::span<const std::uint64_t> queries,
                             const OracleTable* oracle) {
  CostReport r;
  r.config = echo_of(index, kind_name(index.instance().kind));
  r.ell = index.ell();
  r.queries = queries.size();
  const auto t0 = Clock::now();
  AmplifiedAdvice& amp = index.amplified();
  double build_time = 0;
  for (std::uint64_t y : queries) {
    QueryStats st;
    std::optional<std::uint64_t> x;
    if (y < index.outer_range()) {
      const std::uint64_t before = amp.built();
      const auto tq = Clock::now();
      x = amp.query(y, &st);
      if (amp.built() != before) build_time += seconds_since(tq);
    }
    r.probes_per_query.push_back(st.probes);
    r.evals_per_query.push_back(st.evals);
    score(r, index, y, x, oracle);
  }
  const double total = seconds_since(t0);
  r.preprocess_seconds = build_time;
  r.query_seconds = total - build_time;
  r.copies = amp.built();
  r.advice_bits = index.advice_bits();
  r.preprocess_evals = amp.preprocess_evals();
  return r;
}

}  // namespace sumindex
