// Runs the acceptance criteria and exits non-zero if any of them fails.

#include <CLI11.hpp>
#include <iostream>

#include "elastica/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  elastica::AcceptanceOptions opt;
  std::string configs = "configs", output;
  std::vector<int> only;
  bool quiet = false;
  app.add_option("--configs", configs, "Directory with the bundled configs");
  app.add_option("--output", output, "Write experiment outputs below this directory");
  app.add_option("--only", only, "Criterion numbers to run")->delimiter(',');
  app.add_flag("--quiet", quiet, "No progress output");
  CLI11_PARSE(app, argc, argv);

  opt.config_dir = configs;
  opt.output_dir = output;
  opt.only = std::set<int>(only.begin(), only.end());
  opt.log = quiet ? nullptr : &std::cerr;
  const auto results = elastica::run_acceptance(opt, std::cout);
  return elastica::all_passed(results) ? 0 : 1;
}
