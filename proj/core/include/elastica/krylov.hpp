#pragma once

// Matrix-free preconditioned conjugate gradients and a Newton driver over the
// FREE nodes of a Domain. Vectors are full-grid; CLAMPED entries stay 0.

#include <functional>
#include <span>

#include "elastica/grid.hpp"

namespace elastica {

using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

struct PcgParams {
  double rel_tol = 1e-6;
  double abs_tol = 0.0;
  int max_iter = 500;
};

struct PcgResult {
  int iterations = 0;
  double residual_norm = 0.0;
  bool converged = false;
  /// Stopped on a direction with p^T A p <= 0; x holds the last iterate
  /// (or the preconditioned residual if that happened at the first step).
  bool negative_curvature = false;
};

/// z = M^{-1} r for a symmetric positive definite M.
using Preconditioner = std::function<void(std::span<const double> r, std::span<double> z)>;

/// Solves A x = b from x = 0. Stops at ||r|| <= max(abs_tol, rel_tol ||b||).
PcgResult truncated_pcg(const Domain& d, const LinearOperator& op, const Preconditioner& precondition,
                        std::span<const double> b, std::span<double> x, const PcgParams& params);

/// Same with a diagonal preconditioner given by its inverse.
PcgResult truncated_pcg(const Domain& d, const LinearOperator& op, std::span<const double> inv_diag,
                        std::span<const double> b, std::span<double> x, const PcgParams& params);

/// A nonlinear system R(x) = 0 whose Jacobian is applied matrix-free.
class NewtonSystem {
 public:
  virtual ~NewtonSystem() = default;
  /// Linearizes at x and writes R(x) into `residual`.
  virtual void linearize(std::span<const double> x, std::span<double> residual) = 0;
  virtual void apply_jacobian(std::span<const double> v, std::span<double> out) = 0;
  /// Positive approximation of diag(J); used only for preconditioning.
  virtual void jacobian_diagonal(std::span<double> out) = 0;
  /// Systems with a better preconditioner than diag(J) override both.
  virtual bool has_preconditioner() const { return false; }
  virtual void precondition(std::span<const double> r, std::span<double> z) { (void)r, (void)z; }
};

struct NewtonParams {
  double tol = 1e-8;
  int max_iter = 25;
  /// cg.rel_tol is the tightest inner tolerance; with adaptive_forcing the
  /// inner solve only asks for 0.9 (|R_k| / |R_k-1|)^2, at most forcing_max.
  PcgParams cg;
  bool adaptive_forcing = true;
  double forcing_max = 0.1;
};

struct NewtonResult {
  bool converged = false;
  int iterations = 0;
  int cg_iterations = 0;
  double residual_norm = 0.0;
};

/// Full Newton steps x <- x - J^{-1} R(x) until ||R|| <= tol. Fails early if
/// the residual becomes non-finite.
NewtonResult newton_solve(const Domain& d, NewtonSystem& system, std::span<double> x,
                          const NewtonParams& params);

}  // namespace elastica
