#pragma once

// Built-in acceptance suite shared by `elastica validate` and the ctest
// acceptance binary. Every criterion prints one PASS/FAIL line.

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace elastica {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Directory with circle1.cfg, circle2.cfg, relaxation.cfg, topology1.cfg, topology2.cfg.
  std::filesystem::path config_dir = "configs";
  /// When non-empty, experiment CSVs and snapshots are written below it.
  std::filesystem::path output_dir;
  /// Criteria to run; empty runs all.
  std::set<int> only;
  /// Progress of the long experiment runs (may be null).
  std::ostream* log = nullptr;
};

std::string format_result_line(const CriterionResult& r);

/// Runs the selected criteria and prints each result line to `out` as soon as
/// it is known.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& out);

inline bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

}  // namespace elastica
