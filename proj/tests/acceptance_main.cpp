// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance_suite [--only 1,4] [--scale 0.1] [--json out.json] [--quiet]

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sumindex/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sumindex acceptance suite"};
  std::vector<int> only;
  double scale = 1.0;
  std::string json_out;
  bool quiet = false;
  app.add_option("--only", only, "criterion ids")->delimiter(',');
  app.add_option("--scale", scale, "multiplier for run and seed counts")->check(CLI::PositiveNumber);
  app.add_option("--json", json_out, "write metrics here");
  app.add_flag("--quiet", quiet, "suppress progress lines");
  CLI11_PARSE(app, argc, argv);

  namespace acc = sumindex::acceptance;
  acc::Options opt;
  opt.scale = scale;
  if (!quiet) opt.log = [](const std::string& line) { std::cerr << line << '\n'; };
  const auto results = acc::run(only, opt);

  bool all = true;
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    std::cout << acc::format_line(r) << '\n';
    all = all && r.pass;
    doc.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"summary", r.summary},
                   {"seconds", r.seconds}, {"metrics", r.metrics}});
  }
  if (!json_out.empty()) std::ofstream(json_out) << doc.dump(2) << '\n';
  std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << '\n';
  return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
