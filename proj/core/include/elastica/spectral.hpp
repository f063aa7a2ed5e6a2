#pragma once

// Fourier-sine solver on the nodes strictly inside the square grid. Applies
// R S(lambda) R^T where S is a diagonal multiplier in the eigenbasis of the
// 5-point -Laplacian with zero Dirichlet data on the square's edge and R keeps
// FREE nodes only. Used as a preconditioner for the implicit Euler systems.
//
// Not thread-safe: FFTW plans are created in the constructor. The first
// solver of a given size measures plan candidates (about a second); FFTW keeps
// the result for the rest of the process.

#include <functional>
#include <span>
#include <vector>

#include "elastica/grid.hpp"

namespace elastica {

class SineSolver {
 public:
  /// `symbol(lambda_x + lambda_y)` gives the multiplier of each mode.
  SineSolver(DomainPtr domain, const std::function<double(double)>& symbol);
  ~SineSolver();
  SineSolver(const SineSolver&) = delete;
  SineSolver& operator=(const SineSolver&) = delete;

  void apply(std::span<const double> in, std::span<double> out);

  /// Eigenvalue of the 1-D discrete -d^2/dx^2 for mode p = 1..n-2.
  static double eigenvalue_1d(int p, int n, double h);

 private:
  DomainPtr domain_;
  int m_ = 0;  // interior nodes per axis
  std::vector<double> multiplier_;
  double* buffer_ = nullptr;
  void* plan_ = nullptr;
};

/// Inverse of h^2 [shift + scale (eps * lambda + well / eps)^2], the constant
/// coefficient part of the implicit Euler Jacobian for the bending energy.
std::function<double(double)> bending_symbol(double h, double shift, double scale, double epsilon,
                                             double well);

}  // namespace elastica
