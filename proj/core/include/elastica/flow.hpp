#pragma once

// Viscous L2 gradient flow of the relaxed energy: fully implicit Euler steps
// solved by Newton-CG, with step halving and the relaxation / target ramps.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "elastica/functionals.hpp"
#include "elastica/grid.hpp"

namespace elastica {

struct ScheduleSpec {
  /// Length/winding prefactors scale linearly 0 -> 1 over this many relaxation steps.
  int penalty_ramp_steps = 200;
  /// After relaxation, L_target moves linearly from L(u_relaxed) to the configured value.
  int L_ramp_steps = 500;

  void validate() const;
};

struct FlowParams {
  double tau_relax = 1e-6;
  double tau_main = 1e-5;
  int relax_steps = 200;
  /// Absolute residual tolerance; <= 0 selects 1e-8 * sqrt(free nodes).
  double newton_tol = 0.0;
  int newton_max = 25;
  double cg_tol = 1e-6;
  int cg_max = 500;
  /// Loosen the inner tolerance while the Newton residual is still large.
  bool adaptive_forcing = true;
  /// Spectral: sine-transform inverse of the constant coefficient bending
  /// operator. Diagonal: diag of the exact Jacobian.
  enum class Pcg { Spectral, Diagonal } preconditioner = Pcg::Spectral;
  int max_halvings = 6;
  int max_consecutive_rejections = 10;
  /// Acceptance test F(u+) + c ||u+ - u||_w^2 / tau <= F(u) + 1e-10 (1 + |F(u)|).
  double dissipation_factor = 1.0;
  /// Main-phase tau grows by this factor after every step that needed no
  /// halving, capped at tau_max. 1 keeps tau fixed.
  double tau_growth = 1.0;
  double tau_max = 1e-5;
  /// Refresh interval (steps) of the winding weight when a provider is given.
  int weight_refresh = 25;
  ScheduleSpec ramp;

  void validate() const;
  double resolved_newton_tol(const Domain& d) const;
};

struct StepResult {
  bool accepted = false;
  int newton_iters = 0;
  int cg_iters = 0;
  int halvings = 0;
  double energy_before = 0.0;
  double energy_after = 0.0;
  double residual_norm = 0.0;
  double tau_used = 0.0;
  /// ||u+ - u||_w^2 with w = h^2.
  double step_norm_sq = 0.0;
};

struct StepOutput {
  ScalarField u;
  StepResult result;
};

/// One implicit Euler step from u with timestep tau; on Newton failure or a
/// failed dissipation test tau is halved up to f.max_halvings times. A rejected
/// step returns the input field.
StepOutput implicit_euler_step(const ScalarField& u, const EnergyParams& p, const FlowParams& f,
                               double tau);

enum class FlowPhase { Initial, Relaxation, Main };

struct StepContext {
  int step = 0;
  double time = 0.0;
  FlowPhase phase = FlowPhase::Initial;
  const ScalarField* u = nullptr;
  /// Parameters in force for this step (ramped prefactor and target).
  const EnergyParams* params = nullptr;
  /// Null for the initial record.
  const StepResult* result = nullptr;
  /// Energy of u under `params`.
  const EnergyBreakdown* energy = nullptr;
  bool snapshot_due = false;
};

using StepObserver = std::function<void(const StepContext&)>;

/// Supplies the nodal winding weight from the current field (alternating
/// minimization); the flow does not differentiate through it.
using WeightProvider =
    std::function<std::shared_ptr<const std::vector<double>>(const ScalarField&, const EnergyParams&)>;

struct StepRecord {
  int step = 0;
  double time = 0.0;
  FlowPhase phase = FlowPhase::Initial;
  double penalty_scale = 1.0;
  double length_target = 0.0;
  StepResult result;
};

struct Trajectory {
  std::vector<StepRecord> records;
  ScalarField final_field;
  double final_time = 0.0;
  bool aborted = false;
  std::string abort_reason;
};

/// Runs n_steps accepted steps in total: the first f.relax_steps at tau_relax
/// with ramped penalty prefactors (length target held at L(u0)), the rest at
/// tau_main with the length target ramp. Calls `observer` once for the
/// initial field and after every accepted step.
Trajectory run_simulation(const ScalarField& u0, const EnergyParams& p, const FlowParams& f, int n_steps,
                          int snapshot_every = 0, const StepObserver& observer = {},
                          const WeightProvider& weights = {});

/// Schedule values for a given 1-based step; exposed for tests.
double penalty_scale_at(int step, const FlowParams& f);
double length_target_at(int step, const FlowParams& f, double relaxed_length, double target);

}  // namespace elastica
