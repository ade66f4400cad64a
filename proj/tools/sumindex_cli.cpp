// sumindex: generate instances, build advice files, answer queries, sweep
// parameters and run the acceptance suites.
//
// Exit codes: 0 ok, 1 usage, 2 verification failure, 3 I/O or digest
// mismatch, 4 budget refusal.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "sumindex/acceptance.hpp"
#include "sumindex/baselines.hpp"
#include "sumindex/errors.hpp"
#include "sumindex/index_io.hpp"
#include "sumindex/mixing.hpp"
#include "sumindex/oracle.hpp"
#include "sumindex/report.hpp"
#include "sumindex/standalone.hpp"

using namespace sumindex;

namespace {

enum Exit { kOk = 0, kUsage = 1, kVerifyFailed = 2, kIoError = 3, kBudget = 4 };

InversionMode parse_mode(const std::string& s) {
  if (s == "sample-set" || s == "sample_set") return InversionMode::sample_set;
  if (s == "classic-fn" || s == "classic_fn") return InversionMode::classic_fn;
  if (s == "full" || s == "full_inverse") return InversionMode::full_inverse;
  throw CLI::ValidationError("--variant", "unknown inversion variant " + s);
}

struct ConfigFlags {
  double delta = 0.75;
  double prime_constant = kDefaultPrimeConstant;
  std::string variant = "sample-set";
  std::uint64_t seed = 1;
  double c_g = 1, c_t = 1, c_s = 1, c_r = 1;
  unsigned extra_bits = 3;

  void add(CLI::App* app, bool with_delta = true) {
    if (with_delta) app->add_option("--delta", delta, "time exponent in [0, 1]")->check(CLI::Range(0.0, 1.0));
    app->add_option("--prime-constant", prime_constant, "prime interval constant c");
    app->add_option("--variant", variant, "sample-set or classic-fn");
    app->add_option("--seed", seed, "advice randomness seed");
    app->add_option("--c-g", c_g, "sample size constant");
    app->add_option("--c-t", c_t, "chain length constant");
    app->add_option("--c-s", c_s, "chains per table constant");
    app->add_option("--c-r", c_r, "table count constant");
    app->add_option("--xor-extra-bits", extra_bits, "kXOR dispatch width above log2 n");
  }

  IndexConfig config() const {
    IndexConfig c;
    c.delta = delta;
    c.prime_constant = prime_constant;
    c.mode = parse_mode(variant);
    c.seed = seed;
    c.constants = {c_g, c_t, c_s, c_r};
    c.xor_extra_bits = extra_bits;
    return c;
  }
};

// ---- gen ------------------------------------------------------------------

struct GenFlags {
  std::string kind = "3sum";
  std::string profile = "uniform";
  std::uint64_t n = 64, m = 0, M = 1ULL << 16, seed = 1;
  unsigned k = 3, ell = 24;
  std::string out;
};

int cmd_gen(const GenFlags& f) {
  GenParams gp;
  gp.kind = parse_kind(f.kind);
  gp.n = f.n;
  gp.m = f.m;
  gp.k = f.k;
  gp.ell_bits = f.ell;
  gp.M = f.M;
  const Instance inst = gen_instance(parse_profile(f.profile), f.seed, gp);
  if (f.out.empty()) std::cout << format_instance(inst);
  else write_instance_file(f.out, inst);
  return kOk;
}

// ---- preprocess / query ---------------------------------------------------------

int cmd_preprocess(const std::string& instance_path, const std::string& out,
                   const ConfigFlags& cf) {
  const Instance inst = read_instance_file(instance_path);
  const Index index = Index::build(inst, cf.config());
  const std::uint64_t bytes = write_advice_file(out, index);
  std::cerr << "wrote " << out << ": " << index.ell() << " copies, " << bytes << " bytes\n";
  return kOk;
}

int cmd_query(const std::string& advice, const std::string& instance_path,
              const std::vector<std::uint64_t>& ys, bool stats) {
  const Instance inst = read_instance_file(instance_path);
  Index index = read_advice_file(advice, inst);
  for (std::uint64_t y : ys) {
    QueryStats st;
    const auto ans = index.query(y, &st);
    std::cout << y << ':';
    if (!ans) {
      std::cout << " ABSENT";
    } else {
      for (std::uint64_t v : *ans) std::cout << ' ' << v;
    }
    if (stats) std::cout << "  (evals " << st.evals << ", probes " << st.probes << ')';
    std::cout << '\n';
  }
  return kOk;
}

// ---- sweep -----------------------------------------------------------------------

struct SweepFlags {
  std::string mode = "3sum";
  std::vector<std::uint64_t> n{256};
  std::uint64_t m = 0;
  unsigned k = 3, ell = 24;
  std::vector<double> delta{0.75};
  std::uint64_t seeds = 1, queries = 200, M = acceptance::kSweepM;
  std::string profile = "uniform";
  std::string format = "csv";
  std::string out;
  bool amplified = false, timing = false;
  unsigned threads = 0;
  ConfigFlags cfg;
};

struct Cell {
  std::uint64_t n;
  double delta;
  std::uint64_t seed;
};

CostReport run_invert_cell(const SweepFlags& f, const Cell& c) {
  const PlanConstants consts{f.cfg.c_g, f.cfg.c_t, f.cfg.c_s, f.cfg.c_r};
  const ParamPlan plan = plan_parameters(c.n, c.delta, consts, parse_mode(f.cfg.variant));
  FunctionSpec fn = random_function(c.seed, c.n, c.n);
  const std::uint64_t ell = f.amplified ? amplification_copies(c.n, c.n) : 1;
  AmplifiedAdvice amp(inversion_builder(fn, plan, derive_key(f.cfg.seed, c.seed)), ell);
  CostReport r;
  r.config.mode = "invert";
  r.config.variant = mode_name(plan.mode);
  r.config.n = c.n;
  r.config.delta = c.delta;
  r.config.constants = consts;
  r.config.seed = c.seed;
  r.ell = ell;
  Rng rng(derive_key(c.seed, 0x1E));
  const auto t0 = std::chrono::steady_clock::now();
  amp.copy(0);
  r.preprocess_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto t1 = std::chrono::steady_clock::now();
  for (std::uint64_t q = 0; q < f.queries; ++q) {
    const std::uint64_t y = fn(uniform_below(rng, c.n));
    QueryStats st;
    const auto x = f.amplified ? amp.query(y, &st) : amp.copy(0).query(y, &st);
    r.probes_per_query.push_back(st.probes);
    r.evals_per_query.push_back(st.evals);
    ++r.members;
    if (x) ++r.answered;
  }
  r.query_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
  r.queries = f.queries;
  r.copies = amp.built();
  r.advice_bits = amp.advice_bits();
  r.preprocess_evals = amp.preprocess_evals();
  return r;
}

std::vector<std::uint64_t> member_ys(const Instance& inst, std::uint64_t count, Rng& rng) {
  std::vector<std::uint64_t> ys;
  for (std::uint64_t q = 0; q < count; ++q) {
    std::vector<std::uint64_t> t(inst.arity());
    for (unsigned k = 0; k < t.size(); ++k)
      t[k] = uniform_below(rng, inst.kind == InstanceKind::sum3 && k == 1 ? inst.B.size() : inst.n());
    ys.push_back(tuple_value(inst, t));
  }
  return ys;
}

CostReport run_baseline_cell(const SweepFlags& f, const Cell& c, const Instance& inst) {
  CostReport r;
  r.config.mode = "baseline";
  r.config.profile = f.profile;
  r.config.n = inst.n();
  r.config.m = inst.B.size();
  r.config.M = inst.M;
  r.config.delta = c.delta;
  r.config.seed = c.seed;
  const bool sumset = f.cfg.variant != "sorted-array";
  r.config.variant = sumset ? "sorted-sumset" : "sorted-array";
  Rng rng(derive_key(c.seed, 0xBA));
  const auto ys = member_ys(inst, f.queries, rng);
  auto measure = [&](const auto& base) {
    r.advice_bits = base.advice_bits();
    for (std::uint64_t y : ys) {
      QueryStats st;
      const auto ans = base.query(y, &st);
      r.probes_per_query.push_back(st.probes);
      r.evals_per_query.push_back(0);
      ++r.members;
      if (ans && inst.A[ans->first] + inst.B[ans->second] == y) ++r.answered;
    }
  };
  if (sumset) measure(SortedSumsetBaseline(inst.A, inst.B, inst.M));
  else measure(SortedArrayBaseline(inst.A, inst.B, inst.M));
  r.queries = ys.size();
  return r;
}

CostReport run_cell(const SweepFlags& f, const Cell& c) {
  if (f.mode == "invert") return run_invert_cell(f, c);
  GenParams gp;
  gp.n = c.n;
  gp.M = f.M;
  gp.k = f.k;
  gp.ell_bits = f.ell;
  if (f.mode == "3sum" || f.mode == "baseline") {
    gp.kind = InstanceKind::sum3;
    gp.m = f.m;
  } else if (f.mode == "ksum") {
    gp.kind = InstanceKind::sumk;
  } else if (f.mode == "kxor") {
    gp.kind = InstanceKind::xork;
  } else {
    throw CLI::ValidationError("--mode", "unknown mode " + f.mode);
  }
  const Instance inst = gen_instance(parse_profile(f.profile), c.seed, gp);
  if (f.mode == "baseline") return run_baseline_cell(f, c, inst);
  IndexConfig cfg = f.cfg.config();
  cfg.delta = c.delta;
  cfg.seed = derive_key(f.cfg.seed, c.seed);
  cfg.threads = 1;
  Index index = Index::build(inst, cfg);
  Rng rng(derive_key(c.seed, 0x5E));
  const auto ys = member_ys(inst, f.queries, rng);
  CostReport r = f.amplified ? measure_amplified(index, ys, nullptr)
                             : measure_weak_copy(index, ys, nullptr);
  r.config.mode = f.mode;
  r.config.profile = f.profile;
  r.config.seed = c.seed;
  return r;
}

int cmd_sweep(SweepFlags f) {
  if (f.n.empty() || f.delta.empty() || f.seeds == 0)
    throw CLI::ValidationError("sweep", "n, delta and seeds must be non-empty");
  std::vector<Cell> cells;
  for (std::uint64_t n : f.n)
    for (double d : f.delta)
      for (std::uint64_t s = 1; s <= f.seeds; ++s) cells.push_back({n, d, s});
  std::vector<CostReport> rows(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
      try {
        rows[i] = run_cell(f, cells[i]);
        if (!f.timing) rows[i].preprocess_seconds = rows[i].query_seconds = 0;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::min<std::size_t>(worker_threads(f.threads), cells.size());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::ofstream file;
  if (!f.out.empty()) {
    file.open(f.out);
    if (!file) throw std::runtime_error("cannot open " + f.out);
  }
  std::ostream& out = f.out.empty() ? std::cout : file;
  if (f.format == "json") {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : rows) doc.push_back(to_json(r));
    out << doc.dump(2) << '\n';
  } else {
    out << csv_header() << '\n';
    for (const auto& r : rows) out << csv_row(r) << '\n';
  }
  return kOk;
}

// ---- verify ----------------------------------------------------------------------

const std::map<std::string, int> kSuites = {
    {"exhaustive", 1}, {"fd", 2},    {"tradeoff", 3},       {"figure", 4},
    {"inversion", 5},  {"primes", 6}, {"amplification", 7}, {"ksum", 8},
    {"kxor", 9},       {"preprocess", 10}};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  return out;
}

// Slope of log2(advice_bits * median_evals) over log2 n from sweep CSV rows,
// taking the median over seeds at each n.
int verify_tradeoff_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(in, line);
  const auto header = split(line);
  auto col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw FormatError("sweep CSV lacks column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t cn = col("n"), cb = col("advice_bits"), ce = col("median_evals");
  std::map<double, std::vector<double>> by_n;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw FormatError("ragged sweep CSV row");
    by_n[std::stod(cells[cn])].push_back(std::stod(cells[cb]) * std::stod(cells[ce]));
  }
  if (by_n.size() < 2) throw FormatError("need at least two distinct n");
  std::vector<double> xs, ys;
  for (auto& [n, v] : by_n) {
    xs.push_back(std::log2(n));
    ys.push_back(std::log2(median(v)));
    std::cout << "n=" << n << " median S*T=" << median(v) << '\n';
  }
  const double slope = fit_slope(xs, ys);
  const bool pass = slope >= 2.2 && slope <= 2.9;
  std::cout << (pass ? "PASS" : "FAIL") << " tradeoff slope " << slope << " (need [2.2, 2.9])\n";
  return pass ? kOk : kVerifyFailed;
}

int cmd_verify(const std::string& suite, const std::vector<int>& only, double scale,
               std::uint64_t sieve_max, const std::string& input, const std::string& json_out) {
  if (!input.empty()) {
    if (suite != "tradeoff") throw CLI::ValidationError("--input", "only the tradeoff suite reads sweep output");
    return verify_tradeoff_csv(input);
  }
  std::vector<int> ids = only;
  if (ids.empty() && suite != "all") {
    const auto it = kSuites.find(suite);
    if (it == kSuites.end()) throw CLI::ValidationError("--suite", "unknown suite " + suite);
    ids.push_back(it->second);
  }
  acceptance::Options opt;
  opt.scale = scale;
  opt.sieve_max = sieve_max;
  opt.log = [](const std::string& l) { std::cerr << l << '\n'; };
  const auto results = acceptance::run(ids, opt);
  bool all = true;
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    std::cout << acceptance::format_line(r) << '\n';
    all = all && r.pass;
    doc.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"summary", r.summary},
                   {"seconds", r.seconds}, {"metrics", r.metrics}});
  }
  if (!json_out.empty()) std::ofstream(json_out) << doc.dump(2) << '\n';
  return all ? kOk : kVerifyFailed;
}

// ---- primes ----------------------------------------------------------------------

int cmd_primes(std::uint64_t n, std::uint64_t M, double c, std::uint64_t sieve_max) {
  const PrimeInterval I = prime_interval(n, M, c);
  const std::uint64_t count = count_primes(I, sieve_max);
  const double need = required_prime_count(n, M);
  std::cout << "interval [" << I.lo << ", " << I.hi << "] primes " << count << " need "
            << need << (static_cast<double>(count) >= need ? " ok" : " short") << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sumindex: time-space tradeoffs for 3SUM, kSUM and kXOR indexing"};
  app.require_subcommand(1);

  GenFlags gen;
  auto* g = app.add_subcommand("gen", "generate an instance file");
  g->add_option("--kind", gen.kind, "3sum, ksum or kxor");
  g->add_option("--profile", gen.profile, "uniform, clustered, duplicates, arithmetic");
  g->add_option("--n", gen.n, "elements of A");
  g->add_option("--m", gen.m, "elements of B (3sum; default n)");
  g->add_option("--k", gen.k, "k for ksum and kxor");
  g->add_option("--ell", gen.ell, "bit width for kxor");
  g->add_option("--M", gen.M, "value bound");
  g->add_option("--seed", gen.seed, "generator seed");
  g->add_option("--out", gen.out, "output file (default stdout)");

  std::string pre_instance, pre_out;
  ConfigFlags pre_cfg;
  auto* p = app.add_subcommand("preprocess", "build an advice file");
  p->add_option("--instance", pre_instance, "instance file")->required();
  p->add_option("--out", pre_out, "advice file")->required();
  pre_cfg.add(p);

  std::string q_advice, q_instance;
  std::vector<std::uint64_t> q_ys;
  bool q_stats = false;
  auto* q = app.add_subcommand("query", "answer queries from an advice file");
  q->add_option("--advice", q_advice, "advice file")->required();
  q->add_option("--instance", q_instance, "instance file")->required();
  q->add_option("--y", q_ys, "query values")->required()->delimiter(',');
  q->add_flag("--stats", q_stats, "print evaluation and probe counts");

  SweepFlags sw;
  sw.cfg.prime_constant = acceptance::kBenchmarkPrimeConstant;
  sw.cfg.c_r = acceptance::kBenchmarkConstants.c_r;
  auto* s = app.add_subcommand("sweep", "measure cost over n, delta and seeds");
  s->add_option("--mode", sw.mode, "3sum, ksum, kxor, invert or baseline");
  s->add_option("--n", sw.n, "sizes (invert: domain size)")->delimiter(',');
  s->add_option("--m", sw.m, "|B| for 3sum (default n)");
  s->add_option("--k", sw.k, "k for ksum and kxor");
  s->add_option("--ell", sw.ell, "bit width for kxor");
  s->add_option("--delta", sw.delta, "delta values")->delimiter(',')->check(CLI::Range(0.0, 1.0));
  s->add_option("--seeds", sw.seeds, "seeds per cell");
  s->add_option("--queries", sw.queries, "member queries per cell");
  s->add_option("--M", sw.M, "value bound");
  s->add_option("--profile", sw.profile, "instance profile");
  s->add_option("--format", sw.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  s->add_option("--out", sw.out, "output file (default stdout)");
  s->add_flag("--amplified", sw.amplified, "query through all copies instead of one");
  s->add_flag("--timing", sw.timing, "record wall times (output no longer reproducible)");
  s->add_option("--threads", sw.threads, "parallel cells (default SUMINDEX_THREADS or 1)");
  sw.cfg.add(s, false);

  std::string v_suite = "all", v_input, v_json;
  std::vector<int> v_only;
  double v_scale = 1.0;
  std::uint64_t sieve_max = kDefaultSieveMax;
  auto* v = app.add_subcommand("verify", "run acceptance criteria");
  v->add_option("--suite", v_suite, "all, exhaustive, fd, tradeoff, figure, inversion, primes, "
                                    "amplification, ksum, kxor, preprocess");
  v->add_option("--only", v_only, "criterion ids")->delimiter(',');
  v->add_option("--scale", v_scale, "multiplier for run and seed counts")->check(CLI::PositiveNumber);
  v->add_option("--input", v_input, "sweep CSV to fit instead of fresh runs (tradeoff)");
  v->add_option("--json", v_json, "write metrics as JSON");
  v->add_option("--sieve-max", sieve_max, "largest value the prime sieve may reach");

  std::uint64_t pr_n = 64, pr_M = 1ULL << 20;
  double pr_c = kDefaultPrimeConstant;
  auto* pr = app.add_subcommand("primes", "prime interval and sieve count");
  pr->add_option("--n", pr_n, "count parameter");
  pr->add_option("--M", pr_M, "value bound");
  pr->add_option("--prime-constant", pr_c, "interval constant");
  pr->add_option("--sieve-max", sieve_max, "largest value the sieve may reach");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*p) return cmd_preprocess(pre_instance, pre_out, pre_cfg);
    if (*q) return cmd_query(q_advice, q_instance, q_ys, q_stats);
    if (*s) return cmd_sweep(sw);
    if (*v) return cmd_verify(v_suite, v_only, v_scale, sieve_max, v_input, v_json);
    if (*pr) return cmd_primes(pr_n, pr_M, pr_c, sieve_max);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget refusal: " << e.what() << '\n';
    return kBudget;
  } catch (const FormatError& e) {
    std::cerr << "bad file: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kUsage;
}
