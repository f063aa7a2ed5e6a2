#pragma once

// Discrete energy terms of the relaxed elastica functional
//
//   F = B + kL (L - L*)^2 + kT (Tbar - T*)^2 + M
//
// on the masked grid, with the exact derivative of the discrete sums (not a
// discretized Euler-Lagrange operator) and its directional second derivative.
//
// Conventions: every nodal vector is full-grid, FREE entries are the unknowns,
// CLAMPED entries of perturbations/gradients are 0.

#include <memory>
#include <span>
#include <vector>

#include "elastica/double_well.hpp"
#include "elastica/grid.hpp"

namespace elastica {

struct EnergyParams {
  double epsilon = 0.025;
  double alpha_exp = 2.0;
  double beta_exp = 2.0;
  double c_beta = 3.0;
  double sigma_mis = 32.0;  // 0.02 / eps^2 at eps = 0.025
  double length_target = 8.7838;
  double winding_target = kTwoPi;
  bool length_on = false;
  bool winding_on = false;
  bool mismatch_on = false;
  /// Multiplies the length and winding prefactors (relaxation ramp).
  double penalty_scale = 1.0;
  /// Optional nodal weight phi inside the smoothed winding term; all ones
  /// when empty. Used to penalize the orientation-insensitive count.
  std::shared_ptr<const std::vector<double>> winding_weight;

  void validate() const;
  /// penalty_scale * eps^-alpha when the length constraint is on, else 0.
  double length_prefactor() const;
  /// penalty_scale * c_beta * eps^-beta when the winding constraint is on, else 0.
  double winding_prefactor() const;
};

struct EnergyBreakdown {
  double B = 0.0;
  double Lval = 0.0;
  double T_abs = 0.0;
  double T_bar = 0.0;
  double M = 0.0;
  double total = 0.0;
  /// The winding quantity inside the penalty: T_bar, or its phi-weighted
  /// variant when EnergyParams::winding_weight is set.
  double T_penalized = 0.0;
};

/// Rebuilds `total` from the parts.
double recompose_total(const EnergyBreakdown& e, const EnergyParams& p);

/// Linearization of the discrete energy at one field. Evaluates all nodal
/// caches once; gradient and Hessian products are then cheap and reentrant.
class EnergyState {
 public:
  EnergyState(const ScalarField& u, const EnergyParams& params);

  const EnergyBreakdown& breakdown() const { return energy_; }
  const Domain& domain() const { return *domain_; }
  const EnergyParams& params() const { return params_; }
  std::span<const double> mean_curvature() const { return m_; }

  void gradient(std::span<double> out) const;

  /// Scratch buffers for apply_hessian; one per concurrent caller.
  struct Workspace {
    std::vector<double> jv, jjv, t1, gx, gy, ax, ay, div;
  };
  Workspace make_workspace() const;

  void apply_hessian(std::span<const double> v, std::span<double> out, Workspace& ws) const;
  void apply_hessian(std::span<const double> v, std::span<double> out) const;

  /// Diagonal of the Hessian with the e-weighted mismatch curvature dropped;
  /// meant for preconditioning only.
  void hessian_diagonal(std::span<double> out) const;

 private:
  void apply_j(std::span<const double> x, std::span<double> out) const;

  DomainPtr domain_;
  EnergyParams params_;
  EnergyBreakdown energy_;
  double kL_ = 0.0, kT_ = 0.0, kM_ = 0.0;
  std::vector<double> u_, gx_, gy_, wpp_, wppp_, wp_, m_, s_, sp_, phi_, e_;
  std::vector<double> grad_length_, grad_winding_;
};

double diffuse_mean_curvature_at(double u, double lap_u, double epsilon);

/// m(u) = -eps Lap u + W'(u) / eps at FREE nodes, 0 at CLAMPED nodes.
ScalarField diffuse_mean_curvature(const ScalarField& u, const EnergyParams& p);

double energy_length(const ScalarField& u, const EnergyParams& p);
double energy_elastica(const ScalarField& u, const EnergyParams& p);
double winding_abs(const ScalarField& u, const EnergyParams& p);
double winding_smooth(const ScalarField& u, const EnergyParams& p);
/// Always includes sigma_mis, independent of mismatch_on.
double energy_mismatch(const ScalarField& u, const EnergyParams& p);

EnergyBreakdown energy_total(const ScalarField& u, const EnergyParams& p);
ScalarField gradient_total(const ScalarField& u, const EnergyParams& p);
ScalarField hessian_vec(const ScalarField& u, const EnergyParams& p, const ScalarField& v);

}  // namespace elastica
