#pragma once

// Orientation-insensitive component count: minimize
//
//   A(phi, u) = eps^g TV(phi) + eps^-g int |grad u_perp . grad phi| eps |grad u|
//               - (1/c0) int m(u) phi |grad u|
//
// over nodal phi in [-1, 1] (CLAMPED nodes fixed at -1) and report
// T~(u) = (1/c0) int m(u) phi[u] |grad u|.

#include <vector>

#include "elastica/functionals.hpp"
#include "elastica/grid.hpp"

namespace elastica {

struct TVSolveParams {
  double gamma_exp = 1.0;
  int max_iters = 5000;
  double gap_tol = 1e-6;
  /// Gap evaluation cadence (iterations).
  int check_every = 20;
  /// Restart from the running average when the averaged gap beats the
  /// current one; 0 disables restarts.
  int restart_every = 200;
  /// Start from the orientation sign of the nearest zero-level component
  /// instead of phi = 0.
  bool warm_start = true;

  void validate() const;
};

/// Discrete A with forward differences for grad phi: isotropic TV counted at
/// every node whose forward stencil touches a FREE node; the anisotropic and
/// linear terms at FREE nodes with central grad u.
double assemble_A(const ScalarField& phi, const ScalarField& u, const EnergyParams& p, const TVSolveParams& t);

struct PhiSolution {
  ScalarField phi;
  double primal = 0.0;
  double dual = 0.0;
  /// (primal - dual) / max(|primal|, |dual|, 1).
  double relative_gap = 0.0;
  int iterations = 0;
  bool converged = false;
  double winding = 0.0;  // T~ at phi
};

/// Diagonally preconditioned primal-dual (Chambolle-Pock) iteration.
PhiSolution minimize_phi(const ScalarField& u, const EnergyParams& p, const TVSolveParams& t);

/// (1/c0) h^2 sum m phi |grad u| over FREE nodes.
double winding_weighted(const ScalarField& u, const ScalarField& phi, const EnergyParams& p);

struct ImprovedWinding {
  double value = 0.0;
  double relative_gap = 0.0;
  bool converged = false;
  int iterations = 0;
};

ImprovedWinding winding_improved(const ScalarField& u, const EnergyParams& p, const TVSolveParams& t);

}  // namespace elastica
