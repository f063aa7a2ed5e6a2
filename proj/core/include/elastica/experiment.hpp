#pragma once

// One configured simulation: initial field, flow, per-step diagnostics and
// the CSV / snapshot outputs.

#include <functional>
#include <iosfwd>
#include <vector>

#include "elastica/config.hpp"
#include "elastica/flow.hpp"
#include "elastica/io.hpp"

namespace elastica {

DomainPtr make_domain(const SimulationConfig& cfg);

/// Snapshot initial conditions must match the configured grid.
ScalarField build_initial_field(const SimulationConfig& cfg, const DomainPtr& domain);

/// Energy (under `p`), contour metrics and optionally T~ for one field.
TimeSeriesRecord make_record(int step, double time, const ScalarField& u, const EnergyParams& p,
                             const TVSolveParams* tv = nullptr);

/// Nodal phi[u] as the winding weight (improved winding mode).
WeightProvider improved_winding_weights(const TVSolveParams& t);

struct ExperimentOptions {
  bool write_files = true;
  /// Keep a copy of the field every this many steps (0: none) for in-memory comparison.
  int keep_fields_every = 0;
  /// Progress lines every this many steps (0: none).
  int log_every = 0;
  std::ostream* log = nullptr;
  /// Called after the built-in bookkeeping for every record.
  StepObserver extra_observer;
};

struct KeptField {
  int step = 0;
  double time = 0.0;
  ScalarField field;
};

struct ExperimentResult {
  SimulationConfig config;
  ScalarField initial;
  Trajectory trajectory;
  std::vector<TimeSeriesRecord> series;
  /// Parameters in force at each record (ramped prefactor and target).
  std::vector<EnergyParams> params;
  std::vector<KeptField> kept;
  /// Step of the first record with all ramps finished.
  int ramps_done_step = 0;
};

ExperimentResult run_experiment(const SimulationConfig& cfg, const ExperimentOptions& options = {});

}  // namespace elastica
