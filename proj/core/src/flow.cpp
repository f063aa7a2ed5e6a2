#include "elastica/flow.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "elastica/krylov.hpp"
#include "elastica/spectral.hpp"

namespace elastica {

namespace {

template <typename F>
void for_free(const Domain& d, F&& f) {
  const int n = d.n();
  const auto rows = d.free_rows();
  for (int j = 0; j < n; ++j) {
    const std::size_t base = static_cast<std::size_t>(j) * n;
    for (int i = rows[j].begin; i < rows[j].end; ++i) f(base + i);
  }
}

// R(x) = (x - u_prev) w / tau + grad F(x), J = w / tau + Hess F(x).
class ImplicitEulerSystem final : public NewtonSystem {
 public:
  ImplicitEulerSystem(const ScalarField& u_prev, const EnergyParams& p, double tau, FlowParams::Pcg pcg)
      : u_prev_(u_prev), params_(p), shift_(u_prev.domain().h() * u_prev.domain().h() / tau), current_(u_prev) {
    if (pcg == FlowParams::Pcg::Spectral) {
      const double eps = p.epsilon;
      // W'' = 2 in both pure phases.
      spectral_.emplace(u_prev.domain_ptr(), bending_symbol(u_prev.domain().h(), 1.0 / tau, 2.0 / (kC0 * eps), eps, 2.0));
    }
  }

  void linearize(std::span<const double> x, std::span<double> residual) override {
    std::copy(x.begin(), x.end(), current_.values().begin());
    state_.emplace(current_, params_);
    if (!ws_) ws_ = state_->make_workspace();
    state_->gradient(residual);
    const auto prev = u_prev_.values();
    for_free(current_.domain(), [&](std::size_t k) { residual[k] += shift_ * (x[k] - prev[k]); });
  }

  void apply_jacobian(std::span<const double> v, std::span<double> out) override {
    state_->apply_hessian(v, out, *ws_);
    for_free(current_.domain(), [&](std::size_t k) { out[k] += shift_ * v[k]; });
  }

  void jacobian_diagonal(std::span<double> out) override {
    state_->hessian_diagonal(out);
    for_free(current_.domain(), [&](std::size_t k) { out[k] = std::max(out[k] + shift_, shift_); });
  }

  bool has_preconditioner() const override { return spectral_.has_value(); }
  void precondition(std::span<const double> r, std::span<double> z) override { spectral_->apply(r, z); }

  const EnergyState& state() const { return *state_; }

 private:
  const ScalarField& u_prev_;
  EnergyParams params_;
  double shift_;
  ScalarField current_;
  std::optional<EnergyState> state_;
  std::optional<EnergyState::Workspace> ws_;
  std::optional<SineSolver> spectral_;
};

double ramp(int step, int steps) {
  if (steps <= 0) return 1.0;
  return std::min(1.0, static_cast<double>(step) / steps);
}

}  // namespace

void ScheduleSpec::validate() const {
  if (penalty_ramp_steps < 0 || L_ramp_steps < 0) throw std::invalid_argument("schedule: ramp counts must be >= 0");
}

void FlowParams::validate() const {
  if (!(tau_relax > 0.0) || !(tau_main > 0.0)) throw std::invalid_argument("flow: timesteps must be positive");
  if (tau_relax > tau_main) throw std::invalid_argument("flow: tau_relax must not exceed tau_main");
  if (relax_steps < 0) throw std::invalid_argument("flow: relax_steps must be >= 0");
  if (newton_max <= 0 || cg_max <= 0) throw std::invalid_argument("flow: iteration limits must be positive");
  if (!(cg_tol > 0.0)) throw std::invalid_argument("flow: cg_tol must be positive");
  if (max_halvings < 0 || max_consecutive_rejections < 0) throw std::invalid_argument("flow: negative retry limits");
  if (dissipation_factor < 0.0) throw std::invalid_argument("flow: dissipation factor must be >= 0");
  if (tau_growth < 1.0) throw std::invalid_argument("flow: tau_growth must be >= 1");
  if (tau_max < tau_main) throw std::invalid_argument("flow: tau_max must be >= tau_main");
  if (weight_refresh <= 0) throw std::invalid_argument("flow: weight_refresh must be positive");
  ramp.validate();
}

double FlowParams::resolved_newton_tol(const Domain& d) const {
  return newton_tol > 0.0 ? newton_tol : 1e-8 * std::sqrt(static_cast<double>(d.free_count()));
}

StepOutput implicit_euler_step(const ScalarField& u, const EnergyParams& p, const FlowParams& f, double tau) {
  const Domain& d = u.domain();
  const double w = d.h() * d.h();
  const double before = EnergyState(u, p).breakdown().total;
  const double slack = 1e-10 * (1.0 + std::abs(before));

  NewtonParams np;
  np.tol = f.resolved_newton_tol(d);
  np.max_iter = f.newton_max;
  np.cg.rel_tol = f.cg_tol;
  np.cg.max_iter = f.cg_max;
  np.adaptive_forcing = f.adaptive_forcing;

  StepResult res;
  res.energy_before = before;
  double t = tau;
  for (int attempt = 0; attempt <= f.max_halvings; ++attempt, t *= 0.5) {
    res.halvings = attempt;
    res.tau_used = t;
    ImplicitEulerSystem system(u, p, t, f.preconditioner);
    ScalarField next = u;
    const NewtonResult nr = newton_solve(d, system, next.values(), np);
    res.newton_iters += nr.iterations;
    res.cg_iters += nr.cg_iterations;
    res.residual_norm = nr.residual_norm;
    if (!nr.converged) continue;

    double diff = 0.0;
    const auto a = next.values();
    const auto b = u.values();
    for_free(d, [&](std::size_t k) { diff += (a[k] - b[k]) * (a[k] - b[k]); });
    const double after = system.state().breakdown().total;
    res.step_norm_sq = w * diff;
    res.energy_after = after;
    if (after + f.dissipation_factor * res.step_norm_sq / t <= before + slack) {
      res.accepted = true;
      return {std::move(next), res};
    }
  }
  res.accepted = false;
  res.energy_after = before;
  res.step_norm_sq = 0.0;
  return {u, res};
}

double penalty_scale_at(int step, const FlowParams& f) {
  return step <= f.relax_steps ? ramp(step, f.ramp.penalty_ramp_steps) : 1.0;
}

double length_target_at(int step, const FlowParams& f, double relaxed_length, double target) {
  if (step <= f.relax_steps) return relaxed_length;
  return relaxed_length + (target - relaxed_length) * ramp(step - f.relax_steps, f.ramp.L_ramp_steps);
}

Trajectory run_simulation(const ScalarField& u0, const EnergyParams& p, const FlowParams& f, int n_steps,
                          int snapshot_every, const StepObserver& observer, const WeightProvider& weights) {
  p.validate();
  f.validate();
  if (n_steps < 0) throw std::invalid_argument("run_simulation: n_steps must be >= 0");
  if (!u0.all_finite()) throw std::invalid_argument("run_simulation: initial field is not finite");

  Trajectory traj;
  ScalarField u = u0;
  u.clamp(-1.0);
  double time = 0.0;

  // Before the main phase the length target is the current diffuse length.
  double anchor_length = energy_total(u, p).Lval;
  EnergyParams cur = p;
  cur.length_target = anchor_length;
  cur.penalty_scale = f.relax_steps > 0 ? 0.0 : 1.0;

  auto emit = [&](int step, FlowPhase phase, const StepResult* r) {
    StepRecord rec;
    rec.step = step;
    rec.time = time;
    rec.phase = phase;
    rec.penalty_scale = cur.penalty_scale;
    rec.length_target = cur.length_target;
    if (r) rec.result = *r;
    traj.records.push_back(rec);
    if (observer) {
      const EnergyBreakdown e = energy_total(u, cur);
      StepContext ctx;
      ctx.step = step;
      ctx.time = time;
      ctx.phase = phase;
      ctx.u = &u;
      ctx.params = &cur;
      ctx.result = r;
      ctx.energy = &e;
      ctx.snapshot_due = snapshot_every > 0 && step % snapshot_every == 0;
      observer(ctx);
    }
  };
  if (f.relax_steps == 0) cur.length_target = p.length_target;
  emit(0, FlowPhase::Initial, nullptr);

  double tau_main = f.tau_main;
  double retry_tau = 0.0;
  int rejections = 0;
  for (int step = 1; step <= n_steps;) {
    const bool relaxing = step <= f.relax_steps;
    if (step == f.relax_steps + 1 && f.relax_steps > 0) anchor_length = energy_total(u, cur).Lval;
    cur.penalty_scale = penalty_scale_at(step, f);
    cur.length_target = length_target_at(step, f, anchor_length, p.length_target);
    if (weights && cur.winding_on && (step - 1) % f.weight_refresh == 0 && retry_tau == 0.0) {
      cur.winding_weight = weights(u, cur);
    }

    const double nominal = relaxing ? f.tau_relax : tau_main;
    const double tau = retry_tau > 0.0 ? retry_tau : nominal;
    StepOutput out = implicit_euler_step(u, cur, f, tau);
    if (!out.result.accepted) {
      if (++rejections > f.max_consecutive_rejections) {
        traj.aborted = true;
        traj.abort_reason = "more than " + std::to_string(f.max_consecutive_rejections) +
                            " consecutive rejected steps at step " + std::to_string(step);
        break;
      }
      retry_tau = 0.5 * out.result.tau_used;
      continue;
    }
    rejections = 0;
    retry_tau = 0.0;
    u = std::move(out.u);
    time += out.result.tau_used;
    if (!relaxing) {
      if (out.result.halvings > 0) {
        tau_main = std::max(out.result.tau_used, f.tau_main * std::pow(0.5, f.max_halvings));
        if (f.tau_growth == 1.0) tau_main = f.tau_main;
      } else {
        tau_main = std::min(f.tau_max, tau_main * f.tau_growth);
      }
    }
    emit(step, relaxing ? FlowPhase::Relaxation : FlowPhase::Main, &out.result);
    ++step;
  }
  traj.final_field = std::move(u);
  traj.final_time = time;
  return traj;
}

}  // namespace elastica
