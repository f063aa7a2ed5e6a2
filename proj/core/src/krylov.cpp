#include "elastica/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

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

}  // namespace

PcgResult truncated_pcg(const Domain& d, const LinearOperator& op, std::span<const double> inv_diag,
                        std::span<const double> b, std::span<double> x, const PcgParams& params) {
  const Preconditioner diag = [&](std::span<const double> r, std::span<double> z) {
    for_free(d, [&](std::size_t k) { z[k] = inv_diag[k] * r[k]; });
  };
  return truncated_pcg(d, op, diag, b, x, params);
}

PcgResult truncated_pcg(const Domain& d, const LinearOperator& op, const Preconditioner& precondition,
                        std::span<const double> b, std::span<double> x, const PcgParams& params) {
  const std::size_t size = b.size();
  std::vector<double> r(size, 0.0), z(size, 0.0), p(size, 0.0), ap(size, 0.0);
  std::fill(x.begin(), x.end(), 0.0);
  for_free(d, [&](std::size_t k) { r[k] = b[k]; });
  precondition(r, z);
  for_free(d, [&](std::size_t k) { p[k] = z[k]; });

  PcgResult res;
  const double bnorm = std::sqrt(stencil::free_dot(d, b, b));
  const double target = std::max(params.abs_tol, params.rel_tol * bnorm);
  res.residual_norm = bnorm;
  if (bnorm <= target) {
    res.converged = true;
    return res;
  }
  double rz = stencil::free_dot(d, r, z);
  for (int it = 0; it < params.max_iter; ++it) {
    op(p, ap);
    const double pap = stencil::free_dot(d, p, ap);
    if (!(pap > 0.0)) {
      res.negative_curvature = true;
      if (it == 0) for_free(d, [&](std::size_t k) { x[k] = z[k]; });
      return res;
    }
    const double alpha = rz / pap;
    for_free(d, [&](std::size_t k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * ap[k];
    });
    res.iterations = it + 1;
    res.residual_norm = std::sqrt(stencil::free_dot(d, r, r));
    if (res.residual_norm <= target) {
      res.converged = true;
      return res;
    }
    precondition(r, z);
    const double rz_new = stencil::free_dot(d, r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for_free(d, [&](std::size_t k) { p[k] = z[k] + beta * p[k]; });
  }
  return res;
}

NewtonResult newton_solve(const Domain& d, NewtonSystem& system, std::span<double> x,
                          const NewtonParams& params) {
  const std::size_t size = x.size();
  std::vector<double> r(size, 0.0), dx(size, 0.0), diag(size, 0.0), inv(size, 0.0);
  NewtonResult res;
  const LinearOperator op = [&](std::span<const double> v, std::span<double> out) {
    system.apply_jacobian(v, out);
  };
  double prev_norm = 0.0, eta = params.forcing_max;
  for (int it = 0;; ++it) {
    system.linearize(x, r);
    prev_norm = res.residual_norm;
    res.residual_norm = std::sqrt(stencil::free_dot(d, r, r));
    if (!std::isfinite(res.residual_norm)) return res;
    if (res.residual_norm <= params.tol) {
      res.converged = true;
      return res;
    }
    if (it == params.max_iter) return res;
    // Inner tolerance never asks for more than the outer one can use.
    PcgParams cg = params.cg;
    cg.abs_tol = std::max(cg.abs_tol, 0.1 * params.tol);
    if (params.adaptive_forcing) {
      if (it > 0) {
        const double ratio = res.residual_norm / prev_norm;
        // Safeguard against dropping the tolerance too fast.
        const double floor = 0.9 * eta * eta > 0.1 ? 0.9 * eta * eta : 0.0;
        eta = std::min(params.forcing_max, std::max(0.9 * ratio * ratio, floor));
      }
      cg.rel_tol = std::max(cg.rel_tol, eta);
    }
    PcgResult pr;
    if (system.has_preconditioner()) {
      const Preconditioner pc = [&](std::span<const double> in, std::span<double> out) {
        system.precondition(in, out);
      };
      pr = truncated_pcg(d, op, pc, r, dx, cg);
    } else {
      system.jacobian_diagonal(diag);
      for_free(d, [&](std::size_t k) { inv[k] = diag[k] > 0.0 ? 1.0 / diag[k] : 0.0; });
      pr = truncated_pcg(d, op, inv, r, dx, cg);
    }
    res.cg_iterations += pr.iterations;
    for_free(d, [&](std::size_t k) { x[k] -= dx[k]; });
    res.iterations = it + 1;
  }
}

}  // namespace elastica
