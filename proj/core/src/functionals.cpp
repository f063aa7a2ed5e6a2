#include "elastica/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elastica {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

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

void EnergyParams::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("energy: epsilon must be positive");
  if (alpha_exp < 0.0 || beta_exp < 0.0) throw std::invalid_argument("energy: exponents must be non-negative");
  if (c_beta < 0.0) throw std::invalid_argument("energy: c_beta must be non-negative");
  if (sigma_mis < 0.0) throw std::invalid_argument("energy: sigma_mis must be non-negative");
  if (!(length_target > 0.0)) throw std::invalid_argument("energy: length target must be positive");
  if (penalty_scale < 0.0) throw std::invalid_argument("energy: penalty scale must be non-negative");
}

double EnergyParams::length_prefactor() const {
  return length_on ? penalty_scale * std::pow(epsilon, -alpha_exp) : 0.0;
}

double EnergyParams::winding_prefactor() const {
  return winding_on ? penalty_scale * c_beta * std::pow(epsilon, -beta_exp) : 0.0;
}

double recompose_total(const EnergyBreakdown& e, const EnergyParams& p) {
  const double dl = e.Lval - p.length_target;
  const double dt = e.T_penalized - p.winding_target;
  return e.B + p.length_prefactor() * dl * dl + p.winding_prefactor() * dt * dt +
         (p.mismatch_on ? e.M : 0.0);
}

double diffuse_mean_curvature_at(double u, double lap_u, double epsilon) {
  return -epsilon * lap_u + double_well_prime(u) / epsilon;
}

EnergyState::EnergyState(const ScalarField& u, const EnergyParams& params)
    : domain_(u.domain_ptr()), params_(params) {
  params_.validate();
  const Domain& d = *domain_;
  const std::size_t size = u.size();
  const double eps = params_.epsilon;
  const double h2 = d.h() * d.h();

  kL_ = params_.length_prefactor();
  kT_ = params_.winding_prefactor();
  kM_ = params_.mismatch_on ? params_.sigma_mis : 0.0;

  u_ = u.data();
  std::vector<double> lap(size, 0.0);
  gx_.assign(size, 0.0);
  gy_.assign(size, 0.0);
  stencil::laplacian(d, u_, lap);
  stencil::central_gradient(d, u_, gx_, gy_);

  for (auto* v : {&wp_, &wpp_, &wppp_, &m_, &s_, &sp_, &phi_, &e_}) v->assign(size, 0.0);
  if (params_.winding_weight && params_.winding_weight->size() != size) {
    throw std::invalid_argument("energy: winding weight size does not match grid");
  }

  double sum_m2 = 0.0, sum_len = 0.0, sum_tabs = 0.0, sum_tbar = 0.0, sum_tpen = 0.0, sum_e2 = 0.0;
  const double inv_eps = 1.0 / eps;
  const double s_scale = 1.0 / (kSqrt2 * eps);
  for_free(d, [&](std::size_t k) {
    const double uk = u_[k];
    const double w = double_well(uk);
    wp_[k] = double_well_prime(uk);
    wpp_[k] = double_well_second(uk);
    wppp_[k] = double_well_third(uk);
    m_[k] = -eps * lap[k] + wp_[k] * inv_eps;
    s_[k] = (1.0 - uk * uk) * s_scale;
    sp_[k] = -2.0 * uk * s_scale;
    phi_[k] = params_.winding_weight ? (*params_.winding_weight)[k] : 1.0;
    const double g2 = gx_[k] * gx_[k] + gy_[k] * gy_[k];
    e_[k] = 0.5 * eps * g2 - w * inv_eps;

    sum_m2 += m_[k] * m_[k];
    sum_len += 0.5 * eps * g2 + w * inv_eps;
    sum_tabs += m_[k] * std::sqrt(g2);
    sum_tbar += m_[k] * s_[k];
    sum_tpen += phi_[k] * m_[k] * s_[k];
    sum_e2 += e_[k] * e_[k];
  });

  energy_.B = h2 * sum_m2 / (kC0 * eps);
  energy_.Lval = h2 * sum_len / kC0;
  energy_.T_abs = h2 * sum_tabs / kC0;
  energy_.T_bar = h2 * sum_tbar / kC0;
  energy_.T_penalized = h2 * sum_tpen / kC0;
  energy_.M = params_.sigma_mis * h2 * sum_e2;
  energy_.total = recompose_total(energy_, params_);

  if (kL_ > 0.0) {
    grad_length_.assign(size, 0.0);
    stencil::central_divergence_adjoint(d, gx_, gy_, grad_length_);
    for_free(d, [&](std::size_t k) {
      grad_length_[k] = h2 / kC0 * (eps * grad_length_[k] + wp_[k] * inv_eps);
    });
  }
  if (kT_ > 0.0) {
    grad_winding_.assign(size, 0.0);
    std::vector<double> phis(size, 0.0);
    for_free(d, [&](std::size_t k) { phis[k] = phi_[k] * s_[k]; });
    apply_j(phis, grad_winding_);
    for_free(d, [&](std::size_t k) {
      grad_winding_[k] = h2 / kC0 * (grad_winding_[k] + phi_[k] * m_[k] * sp_[k]);
    });
  }
}

void EnergyState::apply_j(std::span<const double> x, std::span<double> out) const {
  const Domain& d = *domain_;
  const double eps = params_.epsilon;
  stencil::laplacian(d, x, out);
  for_free(d, [&](std::size_t k) { out[k] = -eps * out[k] + wpp_[k] * x[k] / eps; });
}

void EnergyState::gradient(std::span<double> out) const {
  const Domain& d = *domain_;
  const double eps = params_.epsilon;
  const double h2 = d.h() * d.h();
  std::fill(out.begin(), out.end(), 0.0);

  apply_j(m_, out);
  const double cb = 2.0 * h2 / (kC0 * eps);
  for_free(d, [&](std::size_t k) { out[k] *= cb; });

  if (kL_ > 0.0) {
    const double c = 2.0 * kL_ * (energy_.Lval - params_.length_target);
    for_free(d, [&](std::size_t k) { out[k] += c * grad_length_[k]; });
  }
  if (kT_ > 0.0) {
    const double c = 2.0 * kT_ * (energy_.T_penalized - params_.winding_target);
    for_free(d, [&](std::size_t k) { out[k] += c * grad_winding_[k]; });
  }
  if (kM_ > 0.0) {
    const std::size_t size = out.size();
    std::vector<double> ax(size, 0.0), ay(size, 0.0), div(size, 0.0);
    for_free(d, [&](std::size_t k) {
      ax[k] = e_[k] * gx_[k];
      ay[k] = e_[k] * gy_[k];
    });
    stencil::central_divergence_adjoint(d, ax, ay, div);
    const double c = 2.0 * kM_ * h2;
    for_free(d, [&](std::size_t k) { out[k] += c * (eps * div[k] - e_[k] * wp_[k] / eps); });
  }
}

EnergyState::Workspace EnergyState::make_workspace() const {
  const std::size_t size = u_.size();
  Workspace ws;
  for (auto* v : {&ws.jv, &ws.jjv, &ws.t1, &ws.gx, &ws.gy, &ws.ax, &ws.ay, &ws.div}) v->assign(size, 0.0);
  return ws;
}

void EnergyState::apply_hessian(std::span<const double> v, std::span<double> out) const {
  Workspace ws = make_workspace();
  apply_hessian(v, out, ws);
}

void EnergyState::apply_hessian(std::span<const double> v, std::span<double> out, Workspace& ws) const {
  const Domain& d = *domain_;
  const double eps = params_.epsilon;
  const double inv_eps = 1.0 / eps;
  const double h2 = d.h() * d.h();
  std::fill(out.begin(), out.end(), 0.0);

  // Elastica: cB [J J v + (W''' m / eps) v]
  apply_j(v, ws.jv);
  apply_j(ws.jv, ws.jjv);
  const double cb = 2.0 * h2 / (kC0 * eps);
  for_free(d, [&](std::size_t k) { out[k] = cb * (ws.jjv[k] + wppp_[k] * m_[k] * inv_eps * v[k]); });

  // Gradient-dependent terms share one adjoint-divergence application.
  if (kL_ > 0.0 || kM_ > 0.0) {
    stencil::central_gradient(d, v, ws.gx, ws.gy);
    const double cl = kL_ > 0.0 ? 2.0 * kL_ * (energy_.Lval - params_.length_target) * h2 / kC0 : 0.0;
    const double cm = 2.0 * kM_ * h2;
    for_free(d, [&](std::size_t k) {
      double ax = cl * eps * ws.gx[k];
      double ay = cl * eps * ws.gy[k];
      double local = cl * wpp_[k] * v[k] * inv_eps;
      if (kM_ > 0.0) {
        const double de = eps * (gx_[k] * ws.gx[k] + gy_[k] * ws.gy[k]) - wp_[k] * v[k] * inv_eps;
        ax += cm * eps * (de * gx_[k] + e_[k] * ws.gx[k]);
        ay += cm * eps * (de * gy_[k] + e_[k] * ws.gy[k]);
        local -= cm * (de * wp_[k] + e_[k] * wpp_[k] * v[k]) * inv_eps;
      }
      ws.ax[k] = ax;
      ws.ay[k] = ay;
      out[k] += local;
    });
    stencil::central_divergence_adjoint(d, ws.ax, ws.ay, ws.div);
    for_free(d, [&](std::size_t k) { out[k] += ws.div[k]; });
  }

  if (kL_ > 0.0) {
    const double c = 2.0 * kL_ * stencil::free_dot(d, grad_length_, v);
    for_free(d, [&](std::size_t k) { out[k] += c * grad_length_[k]; });
  }

  if (kT_ > 0.0) {
    const double ct = 2.0 * kT_ * (energy_.T_penalized - params_.winding_target) * h2 / kC0;
    const double spp = -kSqrt2 * inv_eps;
    for_free(d, [&](std::size_t k) { ws.t1[k] = phi_[k] * sp_[k] * v[k]; });
    apply_j(ws.t1, ws.div);
    const double c1 = 2.0 * kT_ * stencil::free_dot(d, grad_winding_, v);
    for_free(d, [&](std::size_t k) {
      const double local = ws.div[k] + wppp_[k] * v[k] * inv_eps * phi_[k] * s_[k] +
                           phi_[k] * sp_[k] * ws.jv[k] + phi_[k] * m_[k] * spp * v[k];
      out[k] += ct * local + c1 * grad_winding_[k];
    });
  }
}

void EnergyState::hessian_diagonal(std::span<double> out) const {
  const Domain& d = *domain_;
  const int n = d.n();
  const double eps = params_.epsilon;
  const double inv_eps = 1.0 / eps;
  const double h2 = d.h() * d.h();
  const double off = eps / h2;
  const double cb = 2.0 * h2 / (kC0 * eps);
  const double cl = kL_ > 0.0 ? 2.0 * kL_ * (energy_.Lval - params_.length_target) * h2 / kC0 : 0.0;
  const double ct = kT_ > 0.0 ? 2.0 * kT_ * (energy_.T_penalized - params_.winding_target) * h2 / kC0 : 0.0;
  const double spp = -kSqrt2 * inv_eps;
  const auto& mask = d.mask();
  std::fill(out.begin(), out.end(), 0.0);
  for_free(d, [&](std::size_t k) {
    const int nx = mask.is_free(k - 1) + mask.is_free(k + 1);
    const int ny = mask.is_free(k - n) + mask.is_free(k + n);
    const double jd = 4.0 * off + wpp_[k] * inv_eps;
    double diag = cb * (jd * jd + (nx + ny) * off * off + wppp_[k] * m_[k] * inv_eps);
    const double gtg = (nx + ny) / (4.0 * h2);
    if (kL_ > 0.0) {
      diag += cl * (eps * gtg + wpp_[k] * inv_eps) + 2.0 * kL_ * grad_length_[k] * grad_length_[k];
    }
    if (kT_ > 0.0) {
      diag += ct * (2.0 * jd * phi_[k] * sp_[k] + wppp_[k] * inv_eps * phi_[k] * s_[k] +
                    phi_[k] * m_[k] * spp) +
              2.0 * kT_ * grad_winding_[k] * grad_winding_[k];
    }
    if (kM_ > 0.0) {
      // e_k enters the gradient at its four neighbours and the well term at k.
      double nb = 0.0;
      for (const std::size_t l : {k - 1, k + 1}) {
        if (mask.is_free(l)) nb += eps * eps * gx_[l] * gx_[l] + eps * e_[l];
      }
      for (const std::size_t l : {k - n, k + n}) {
        if (mask.is_free(l)) nb += eps * eps * gy_[l] * gy_[l] + eps * e_[l];
      }
      diag += 2.0 * kM_ * h2 *
              (wp_[k] * wp_[k] * inv_eps * inv_eps - e_[k] * wpp_[k] * inv_eps + nb / (4.0 * h2));
    }
    out[k] = diag;
  });
}

ScalarField diffuse_mean_curvature(const ScalarField& u, const EnergyParams& p) {
  EnergyParams q = p;
  q.length_on = q.winding_on = q.mismatch_on = false;
  const EnergyState state(u, q);
  const auto m = state.mean_curvature();
  return ScalarField(u.domain_ptr(), std::vector<double>(m.begin(), m.end()));
}

double energy_length(const ScalarField& u, const EnergyParams& p) { return energy_total(u, p).Lval; }
double energy_elastica(const ScalarField& u, const EnergyParams& p) { return energy_total(u, p).B; }
double winding_abs(const ScalarField& u, const EnergyParams& p) { return energy_total(u, p).T_abs; }
double winding_smooth(const ScalarField& u, const EnergyParams& p) { return energy_total(u, p).T_bar; }
double energy_mismatch(const ScalarField& u, const EnergyParams& p) { return energy_total(u, p).M; }

EnergyBreakdown energy_total(const ScalarField& u, const EnergyParams& p) {
  const EnergyState state(u, p);
  return state.breakdown();
}

ScalarField gradient_total(const ScalarField& u, const EnergyParams& p) {
  const EnergyState state(u, p);
  ScalarField g(u.domain_ptr(), 0.0);
  state.gradient(g.values());
  return g;
}

ScalarField hessian_vec(const ScalarField& u, const EnergyParams& p, const ScalarField& v) {
  const EnergyState state(u, p);
  ScalarField dir = v;
  dir.clamp(0.0);
  ScalarField out(u.domain_ptr(), 0.0);
  state.apply_hessian(dir.values(), out.values());
  return out;
}

}  // namespace elastica
