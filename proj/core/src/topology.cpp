#include "elastica/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>

#include "elastica/contour.hpp"

namespace elastica {

namespace {

// Row-scaled saddle form of A: min_phi max_{|y|<=1, |z|<=1} <K phi, (y, z)> + <c, phi>
// with tv rows w (D+x phi, D+y phi) and anisotropic rows r_k (a_k . D+ phi).
struct TVProblem {
  const Domain* d = nullptr;
  int n = 0;
  double h = 0.0;
  double w = 0.0;  // eps^g h^2
  std::vector<std::uint32_t> free_idx, tv_idx, an_idx;
  std::vector<double> c, ax, ay, r;
  std::vector<double> tau, sigma_an;
  double sigma_tv = 0.0;
  double dual_offset_coeff = 0.0;

  TVProblem(const ScalarField& u, const EnergyParams& p, const TVSolveParams& t) {
    d = &u.domain();
    n = d->n();
    h = d->h();
    const double eps = p.epsilon;
    const double h2 = h * h;
    w = std::pow(eps, t.gamma_exp) * h2;
    const std::size_t size = u.size();
    const auto& mask = d->mask();

    std::vector<double> lap(size, 0.0), gx(size, 0.0), gy(size, 0.0);
    stencil::laplacian(*d, u.values(), lap);
    stencil::central_gradient(*d, u.values(), gx, gy);

    c.assign(size, 0.0);
    ax.assign(size, 0.0);
    ay.assign(size, 0.0);
    r.assign(size, 0.0);
    const double rscale = std::pow(eps, 1.0 - t.gamma_exp) * h2;
    const auto rows = d->free_rows();
    for (int j = 0; j < n; ++j) {
      for (int i = rows[j].begin; i < rows[j].end; ++i) {
        const std::size_t k = static_cast<std::size_t>(j) * n + i;
        free_idx.push_back(static_cast<std::uint32_t>(k));
        const double g = std::hypot(gx[k], gy[k]);
        const double m = diffuse_mean_curvature_at(u[k], lap[k], eps);
        c[k] = -h2 / kC0 * m * g;
        if (g > 0.0) {
          // Unit vector along the level line (grad u rotated clockwise).
          ax[k] = gy[k] / g;
          ay[k] = -gx[k] / g;
          r[k] = rscale * g * g;
          an_idx.push_back(static_cast<std::uint32_t>(k));
        }
      }
    }
    for (std::size_t k = 0; k + n + 1 < size; ++k) {
      if (mask.is_free(k) || mask.is_free(k + 1) || mask.is_free(k + n)) {
        tv_idx.push_back(static_cast<std::uint32_t>(k));
      }
    }

    // Diagonal steps from absolute row and column sums of the scaled operator.
    sigma_tv = h / (2.0 * w);
    sigma_an.assign(size, 0.0);
    for (auto k : an_idx) {
      sigma_an[k] = h / (r[k] * (std::abs(ax[k] + ay[k]) + std::abs(ax[k]) + std::abs(ay[k])));
    }
    tau.assign(size, 0.0);
    for (auto k : free_idx) {
      const double col = 4.0 * w + r[k] * std::abs(ax[k] + ay[k]) + r[k - 1] * std::abs(ax[k - 1]) +
                         r[k - n] * std::abs(ay[k - n]);
      tau[k] = h / col;
    }
  }

  // phi is a full-grid vector with CLAMPED entries at -1.
  double primal(const std::vector<double>& phi) const {
    double tv = 0.0, an = 0.0, lin = 0.0;
    for (auto k : tv_idx) tv += std::hypot(phi[k + 1] - phi[k], phi[k + n] - phi[k]);
    for (auto k : an_idx) an += r[k] * std::abs(ax[k] * (phi[k + 1] - phi[k]) + ay[k] * (phi[k + n] - phi[k]));
    for (auto k : free_idx) lin += c[k] * phi[k];
    return (w * tv + an) / h + lin;
  }

  // K^T (y, z) at FREE nodes, into g.
  void adjoint(const std::vector<double>& yx, const std::vector<double>& yy, const std::vector<double>& z,
               std::vector<double>& g) const {
    for (auto k : free_idx) {
      const double tv = (yx[k - 1] - yx[k]) + (yy[k - n] - yy[k]);
      const double an = r[k - 1] * ax[k - 1] * z[k - 1] + r[k - n] * ay[k - n] * z[k - n] -
                        r[k] * (ax[k] + ay[k]) * z[k];
      g[k] = (w * tv + an) / h;
    }
  }

  // Dual objective: <K phi_c, (y, z)> - sum |K_F^T (y, z) + c| with phi_c = -1 on
  // CLAMPED and 0 on FREE nodes.
  double dual(const std::vector<double>& yx, const std::vector<double>& yy, const std::vector<double>& z,
              std::vector<double>& scratch) const {
    const auto& mask = d->mask();
    auto pc = [&](std::size_t k) { return mask.is_free(k) ? 0.0 : -1.0; };
    double off = 0.0;
    for (auto k : tv_idx) {
      off += w * ((pc(k + 1) - pc(k)) * yx[k] + (pc(k + n) - pc(k)) * yy[k]);
    }
    // Anisotropic rows sit at FREE nodes, so only the neighbours can be clamped.
    for (auto k : an_idx) off += r[k] * (ax[k] * pc(k + 1) + ay[k] * pc(k + n)) * z[k];
    adjoint(yx, yy, z, scratch);
    double s = 0.0;
    for (auto k : free_idx) s += std::abs(scratch[k] + c[k]);
    return off / h - s;
  }
};

// Each node takes the orientation sign (turning number) of the nearest zero
// level set component, by breadth-first growth from the crossing points.
std::vector<double> contour_sign_guess(const ScalarField& u) {
  const GridSpec& g = u.grid();
  const int n = g.n;
  std::vector<double> label(g.node_count(), 0.0);
  std::vector<char> seen(g.node_count(), 0);
  std::queue<std::size_t> q;
  for (const auto& comp : extract_contour(u).components) {
    const double sign = comp.turning_number >= 0.0 ? 1.0 : -1.0;
    for (const auto& p : comp.vertices) {
      const int i = std::clamp(static_cast<int>(std::lround((p[0] + g.extent) / g.h)), 0, n - 1);
      const int j = std::clamp(static_cast<int>(std::lround((p[1] + g.extent) / g.h)), 0, n - 1);
      const std::size_t k = g.index(i, j);
      if (!seen[k]) {
        seen[k] = 1;
        label[k] = sign;
        q.push(k);
      }
    }
  }
  if (q.empty()) {
    std::fill(label.begin(), label.end(), -1.0);
    return label;
  }
  while (!q.empty()) {
    const std::size_t k = q.front();
    q.pop();
    const int i = static_cast<int>(k % n), j = static_cast<int>(k / n);
    const std::size_t nb[4] = {k - 1, k + 1, k - n, k + n};
    const bool ok[4] = {i > 0, i + 1 < n, j > 0, j + 1 < n};
    for (int a = 0; a < 4; ++a) {
      if (ok[a] && !seen[nb[a]]) {
        seen[nb[a]] = 1;
        label[nb[a]] = label[k];
        q.push(nb[a]);
      }
    }
  }
  return label;
}

double relative_gap(double primal, double dual) {
  return (primal - dual) / std::max({std::abs(primal), std::abs(dual), 1.0});
}

}  // namespace

void TVSolveParams::validate() const {
  if (!(gamma_exp > 0.0)) throw std::invalid_argument("tvsolve: gamma must be positive");
  if (!(gap_tol > 0.0)) throw std::invalid_argument("tvsolve: gap tolerance must be positive");
  if (max_iters <= 0 || check_every <= 0) throw std::invalid_argument("tvsolve: iteration counts must be positive");
  if (restart_every < 0) throw std::invalid_argument("tvsolve: restart interval must be >= 0");
}

double assemble_A(const ScalarField& phi, const ScalarField& u, const EnergyParams& p, const TVSolveParams& t) {
  t.validate();
  const TVProblem prob(u, p, t);
  return prob.primal(phi.data());
}

double winding_weighted(const ScalarField& u, const ScalarField& phi, const EnergyParams& p) {
  const Domain& d = u.domain();
  const std::size_t size = u.size();
  std::vector<double> lap(size, 0.0), gx(size, 0.0), gy(size, 0.0);
  stencil::laplacian(d, u.values(), lap);
  stencil::central_gradient(d, u.values(), gx, gy);
  const int n = d.n();
  const auto rows = d.free_rows();
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = rows[j].begin; i < rows[j].end; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * n + i;
      s += diffuse_mean_curvature_at(u[k], lap[k], p.epsilon) * phi[k] * std::hypot(gx[k], gy[k]);
    }
  }
  return d.h() * d.h() * s / kC0;
}

PhiSolution minimize_phi(const ScalarField& u, const EnergyParams& p, const TVSolveParams& t) {
  p.validate();
  t.validate();
  const TVProblem prob(u, p, t);
  const std::size_t size = u.size();
  const int n = prob.n;

  std::vector<double> phi(size, -1.0), phi_old(size), g(size, 0.0), scratch(size, 0.0);
  std::vector<double> yx(size, 0.0), yy(size, 0.0), z(size, 0.0);
  // Running averages since the last restart.
  std::vector<double> aphi(size, -1.0), ayx(size, 0.0), ayy(size, 0.0), az(size, 0.0);
  int avg_count = 0;

  if (t.warm_start) {
    const auto guess = contour_sign_guess(u);
    for (auto k : prob.free_idx) phi[k] = guess[k];
  } else {
    for (auto k : prob.free_idx) phi[k] = 0.0;
  }

  PhiSolution best;
  best.relative_gap = std::numeric_limits<double>::infinity();
  std::vector<double> best_phi = phi;

  auto evaluate = [&](const std::vector<double>& ph, const std::vector<double>& a, const std::vector<double>& b,
                      const std::vector<double>& zz, double& primal, double& dual) {
    primal = prob.primal(ph);
    dual = prob.dual(a, b, zz, scratch);
    return relative_gap(primal, dual);
  };

  int it = 0;
  for (; it < t.max_iters;) {
    phi_old = phi;
    prob.adjoint(yx, yy, z, g);
    for (auto k : prob.free_idx) phi[k] = std::clamp(phi[k] - prob.tau[k] * (g[k] + prob.c[k]), -1.0, 1.0);
    // Extrapolated primal point, stored in phi_old.
    for (auto k : prob.free_idx) phi_old[k] = 2.0 * phi[k] - phi_old[k];
    const auto& pb = phi_old;
    for (auto k : prob.tv_idx) {
      const double vx = yx[k] + prob.sigma_tv * prob.w * (pb[k + 1] - pb[k]) / prob.h;
      const double vy = yy[k] + prob.sigma_tv * prob.w * (pb[k + n] - pb[k]) / prob.h;
      const double norm = std::hypot(vx, vy);
      const double s = norm > 1.0 ? 1.0 / norm : 1.0;
      yx[k] = vx * s;
      yy[k] = vy * s;
    }
    for (auto k : prob.an_idx) {
      const double lin = prob.ax[k] * (pb[k + 1] - pb[k]) + prob.ay[k] * (pb[k + n] - pb[k]);
      z[k] = std::clamp(z[k] + prob.sigma_an[k] * prob.r[k] * lin / prob.h, -1.0, 1.0);
    }
    ++it;
    ++avg_count;
    const double wnew = 1.0 / avg_count;
    for (auto k : prob.free_idx) aphi[k] += wnew * (phi[k] - aphi[k]);
    for (auto k : prob.tv_idx) {
      ayx[k] += wnew * (yx[k] - ayx[k]);
      ayy[k] += wnew * (yy[k] - ayy[k]);
    }
    for (auto k : prob.an_idx) az[k] += wnew * (z[k] - az[k]);

    if (it % t.check_every != 0 && it != t.max_iters) continue;
    double pc = 0.0, dc = 0.0;
    const double gap_cur = evaluate(phi, yx, yy, z, pc, dc);
    double pa = 0.0, da = 0.0;
    const double gap_avg = evaluate(aphi, ayx, ayy, az, pa, da);
    const bool use_avg = gap_avg < gap_cur;
    const double gap = use_avg ? gap_avg : gap_cur;
    if (gap < best.relative_gap) {
      best.relative_gap = gap;
      best.primal = use_avg ? pa : pc;
      best.dual = use_avg ? da : dc;
      best_phi = use_avg ? aphi : phi;
    }
    if (best.relative_gap <= t.gap_tol) break;
    if (t.restart_every > 0 && avg_count >= t.restart_every) {
      if (use_avg) {
        phi = aphi;
        yx = ayx;
        yy = ayy;
        z = az;
      }
      aphi = phi;
      ayx = yx;
      ayy = yy;
      az = z;
      avg_count = 0;
    }
  }

  best.iterations = it;
  best.converged = best.relative_gap <= t.gap_tol;
  best.phi = ScalarField(u.domain_ptr(), std::move(best_phi));
  best.winding = winding_weighted(u, best.phi, p);
  return best;
}

ImprovedWinding winding_improved(const ScalarField& u, const EnergyParams& p, const TVSolveParams& t) {
  const PhiSolution s = minimize_phi(u, p, t);
  return {s.winding, s.relative_gap, s.converged, s.iterations};
}

}  // namespace elastica
