// Command line front end: run experiments, inspect snapshots, solve for the
// improved winding number and run the acceptance suite.

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "elastica/acceptance.hpp"
#include "elastica/config.hpp"
#include "elastica/contour.hpp"
#include "elastica/experiment.hpp"
#include "elastica/io.hpp"
#include "elastica/topology.hpp"

namespace {

using namespace elastica;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

// Config errors and unreadable inputs are usage errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SimulationConfig load(const std::string& path) {
  try {
    return load_config(path);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

Snapshot load_snapshot(const std::string& path) {
  try {
    return read_snapshot(path);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

void print_energy(const EnergyBreakdown& e) {
  fmt::print("B       {:.12g}\nL       {:.12g}\nT_abs   {:.12g}\nT_bar   {:.12g}\nM       {:.12g}\ntotal   {:.12g}\n",
             e.B, e.Lval, e.T_abs, e.T_bar, e.M, e.total);
}

int cmd_run(const std::string& cfg_path, int steps, const std::string& out_dir, int log_every) {
  SimulationConfig cfg = load(cfg_path);
  if (steps >= 0) cfg.steps = steps;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  ExperimentOptions opt;
  opt.log = &std::cout;
  opt.log_every = log_every;
  const ExperimentResult res = run_experiment(cfg, opt);
  const auto& last = res.series.back();
  fmt::print("{}: {} records, t = {:.6e}, F = {:.10g}, components = {}, output in {}\n", cfg.name,
             res.series.size(), last.time, last.energy.total, last.components, cfg.output_dir.string());
  if (res.trajectory.aborted) {
    fmt::print(std::cerr, "run aborted: {}\n", res.trajectory.abort_reason);
    return kFailed;
  }
  return kOk;
}

int cmd_energy(const std::string& snap_path, const std::string& cfg_path) {
  const Snapshot snap = load_snapshot(snap_path);
  const SimulationConfig cfg = load(cfg_path);
  print_energy(energy_total(snap.field, cfg.energy));
  return kOk;
}

int cmd_contour(const std::string& snap_path) {
  const Snapshot snap = load_snapshot(snap_path);
  const Contour c = extract_contour(snap.field);
  const ContourMetrics m = contour_metrics(c);
  fmt::print("components  {}\nlength      {:.12g}\nmax_radius  {:.12g}\n", m.component_count, m.length, m.max_radius);
  for (std::size_t i = 0; i < c.components.size(); ++i) {
    const auto& comp = c.components[i];
    fmt::print("  [{}] vertices {} length {:.10g} turning {:+.6f} area {:+.10g}\n", i, comp.vertices.size(),
               comp.length, comp.turning_number, comp.signed_area);
  }
  return kOk;
}

int cmd_tvsolve(const std::string& snap_path, const std::string& cfg_path, int max_iters) {
  const Snapshot snap = load_snapshot(snap_path);
  SimulationConfig cfg = load(cfg_path);
  if (max_iters > 0) cfg.topology.max_iters = max_iters;
  const PhiSolution sol = minimize_phi(snap.field, cfg.energy, cfg.topology);
  fmt::print("T_tilde     {:.12g}\nT_tilde/2pi {:.8f}\nprimal      {:.12g}\ndual        {:.12g}\ngap         {:.3e}\n"
             "iterations  {}\nconverged   {}\n",
             sol.winding, sol.winding / kTwoPi, sol.primal, sol.dual, sol.relative_gap, sol.iterations,
             sol.converged ? "yes" : "no");
  return kOk;
}

int cmd_init(const std::string& cfg_path, const std::string& out) {
  const SimulationConfig cfg = load(cfg_path);
  const ScalarField u = build_initial_field(cfg, make_domain(cfg));
  write_snapshot(u, out);
  fmt::print("wrote {}\n", out);
  return kOk;
}

int cmd_validate(const std::string& config_dir, const std::vector<int>& only, const std::string& out_dir,
                 bool quiet) {
  AcceptanceOptions opt;
  opt.config_dir = config_dir;
  opt.output_dir = out_dir;
  opt.only = std::set<int>(only.begin(), only.end());
  opt.log = quiet ? nullptr : &std::cerr;
  const auto results = run_acceptance(opt, std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  fmt::print("{} of {} criteria passed\n", results.size() - failed, results.size());
  return failed == 0 ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-field elastica simulator"};
  app.require_subcommand(1);

  std::string cfg_path, snap_path, out, config_dir = "configs";
  int steps = -1, log_every = 100, max_iters = 0;
  std::vector<int> only;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run a configured simulation");
  run->add_option("config", cfg_path, "Config file")->required();
  run->add_option("--steps", steps, "Override flow.steps");
  run->add_option("--output", out, "Override output.dir");
  run->add_option("--log-every", log_every, "Progress line cadence (0: silent)");

  auto* energy = app.add_subcommand("energy", "Print the energy breakdown of a snapshot");
  energy->add_option("snapshot", snap_path, "PFIELD snapshot")->required();
  energy->add_option("config", cfg_path, "Config file with the energy parameters")->required();

  auto* contour = app.add_subcommand("contour", "Print zero level set metrics of a snapshot");
  contour->add_option("snapshot", snap_path, "PFIELD snapshot")->required();

  auto* tv = app.add_subcommand("tvsolve", "Compute the improved winding number of a snapshot");
  tv->add_option("snapshot", snap_path, "PFIELD snapshot")->required();
  tv->add_option("config", cfg_path, "Config file with energy and topology parameters")->required();
  tv->add_option("--max-iters", max_iters, "Override topology.max_iters");

  auto* init = app.add_subcommand("init", "Write the initial field of a config as a snapshot");
  init->add_option("config", cfg_path, "Config file")->required();
  init->add_option("output", out, "Snapshot path")->required();

  auto* validate = app.add_subcommand("validate", "Run the acceptance suite");
  validate->add_option("configs", config_dir, "Directory with the bundled configs")->capture_default_str();
  validate->add_option("--only", only, "Criterion numbers to run")->delimiter(',');
  validate->add_option("--output", out, "Write experiment outputs below this directory");
  validate->add_flag("--quiet", quiet, "No progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(cfg_path, steps, out, log_every);
    if (*energy) return cmd_energy(snap_path, cfg_path);
    if (*contour) return cmd_contour(snap_path);
    if (*tv) return cmd_tvsolve(snap_path, cfg_path, max_iters);
    if (*init) return cmd_init(cfg_path, out);
    if (*validate) return cmd_validate(config_dir, only, out, quiet);
  } catch (const UsageError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kFailed;
  }
  return kUsage;
}
