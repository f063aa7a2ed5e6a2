#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "elastica/functionals.hpp"
#include "elastica/profiles.hpp"

namespace elastica {
namespace {

ScalarField tanh_circle(const DomainPtr& d, double R, double eps) {
  ScalarField u(d, -1.0);
  const GridSpec& g = d->grid();
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (!d->mask().is_free(g.index(i, j))) continue;
      u.at(i, j) = optimal_profile((R - std::hypot(g.coord(i), g.coord(j))) / eps);
    }
  }
  return u;
}

ScalarField smooth_random(const DomainPtr& d, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> coef(-0.4, 0.4);
  double a[4][4];
  for (auto& row : a) {
    for (auto& v : row) v = coef(rng);
  }
  ScalarField u(d, -1.0);
  const GridSpec& g = d->grid();
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (!d->mask().is_free(g.index(i, j))) continue;
      double s = 0.0;
      for (int p = 0; p < 4; ++p) {
        for (int q = 0; q < 4; ++q) s += a[p][q] * std::cos((p + 1) * g.coord(i)) * std::sin((q + 1) * g.coord(j) + p);
      }
      u.at(i, j) = s;
    }
  }
  return u;
}

EnergyParams all_terms(double eps, const ScalarField& u) {
  EnergyParams p;
  p.epsilon = eps;
  p.sigma_mis = 0.02 / (eps * eps);
  p.length_on = p.winding_on = p.mismatch_on = true;
  const EnergyBreakdown e = energy_total(u, p);
  p.length_target = 1.05 * e.Lval;
  p.winding_target = 1.05 * e.T_bar;
  return p;
}

double dot(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

TEST(Energies, PureStateIsZero) {
  auto d = Domain::create(48);
  EnergyParams p;
  p.length_on = p.mismatch_on = true;
  p.winding_on = false;
  const EnergyBreakdown e = energy_total(ScalarField(d, -1.0), p);
  EXPECT_EQ(e.B, 0.0);
  EXPECT_EQ(e.Lval, 0.0);
  EXPECT_EQ(e.T_bar, 0.0);
  EXPECT_EQ(e.M, 0.0);
}

TEST(Energies, CircleValues) {
  const double eps = 0.025, R = 0.5;
  auto d = Domain::create(321, 1.1);  // h = eps / 3.6
  const ScalarField u = tanh_circle(d, R, eps);
  EnergyParams p;
  p.epsilon = eps;
  const EnergyBreakdown e = energy_total(u, p);
  EXPECT_NEAR(e.Lval / (2 * std::numbers::pi * R), 1.0, 0.01);
  EXPECT_NEAR(e.B / (2 * std::numbers::pi / R), 1.0, 0.03);
  EXPECT_NEAR(e.T_bar / kTwoPi, 1.0, 0.03);
  EXPECT_NEAR(e.T_abs / kTwoPi, 1.0, 0.03);
  // Equipartition of the optimal profile keeps the mismatch far below that of
  // a profile stretched to twice the width.
  const ScalarField wide = tanh_circle(d, R, 2 * eps);
  EXPECT_LT(e.M, 0.05 * energy_mismatch(wide, p));
}

TEST(Energies, ReversedCircleHasNegativeWinding) {
  const double eps = 0.025;
  auto d = Domain::create(201, 1.1);
  ScalarField u = tanh_circle(d, 0.4, eps);
  for (auto& v : u.data()) v = -v;
  EnergyParams p;
  p.epsilon = eps;
  EXPECT_NEAR(winding_smooth(u, p) / kTwoPi, -1.0, 0.03);
  EXPECT_NEAR(winding_abs(u, p) / kTwoPi, -1.0, 0.03);
}

TEST(MeanCurvature, CircleInterfaceValue) {
  const double eps = 0.025, R = 0.5;
  auto d = Domain::create(481, 1.2);
  const ScalarField u = tanh_circle(d, R, eps);
  EnergyParams p;
  p.epsilon = eps;
  const ScalarField m = diffuse_mean_curvature(u, p);
  // (0.5, 0) is the node i = 340, j = 240.
  EXPECT_NEAR(m.at(340, 240) * std::sqrt(2.0) * R, 1.0, 0.02);
}

TEST(MeanCurvature, PointwiseFormula) {
  EXPECT_DOUBLE_EQ(diffuse_mean_curvature_at(0.5, 2.0, 0.1), -0.2 + (0.125 - 0.5) / 0.1);
}

TEST(Energies, TotalMatchesRecomposition) {
  auto d = Domain::create(48);
  const ScalarField u = smooth_random(d, 3);
  const EnergyParams p = all_terms(0.1, u);
  const EnergyBreakdown e = energy_total(u, p);
  EXPECT_NEAR(recompose_total(e, p), e.total, 1e-10 * std::abs(e.total));
  const double dl = e.Lval - p.length_target, dt = e.T_bar - p.winding_target;
  const double manual = e.B + dl * dl / (0.1 * 0.1) + 3.0 * dt * dt / (0.1 * 0.1) + e.M;
  EXPECT_NEAR(e.total, manual, 1e-10 * std::abs(manual));
}

TEST(Gradient, MatchesCentralDifferences) {
  auto d = Domain::create(40);
  const ScalarField u = smooth_random(d, 7);
  const EnergyParams p = all_terms(0.1, u);
  const ScalarField g = gradient_total(u, p);
  double gmax = 0.0;
  for (double v : g.values()) gmax = std::max(gmax, std::abs(v));
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, u.size() - 1);
  int checked = 0;
  while (checked < 30) {
    const std::size_t k = pick(rng);
    if (!d->mask().is_free(k) || std::abs(g[k]) < 0.05 * gmax) continue;
    const double step = 1e-5;
    ScalarField up = u, dn = u;
    up[k] += step;
    dn[k] -= step;
    const double fd = (energy_total(up, p).total - energy_total(dn, p).total) / (2 * step);
    EXPECT_NEAR(fd / g[k], 1.0, 1e-4) << "node " << k;
    ++checked;
  }
}

TEST(Gradient, VanishesOnClampedNodes) {
  auto d = Domain::create(40);
  const ScalarField u = smooth_random(d, 5);
  const ScalarField g = gradient_total(u, all_terms(0.1, u));
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!d->mask().is_free(k)) EXPECT_EQ(g[k], 0.0);
  }
}

TEST(Hessian, SymmetricAndMatchesGradientDifferences) {
  auto d = Domain::create(40);
  const ScalarField u = smooth_random(d, 9);
  const EnergyParams p = all_terms(0.1, u);
  ScalarField v = smooth_random(d, 21), w = smooth_random(d, 22);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!d->mask().is_free(k)) v[k] = w[k] = 0.0;
  }
  const ScalarField hv = hessian_vec(u, p, v), hw = hessian_vec(u, p, w);
  EXPECT_NEAR(dot(hv, w), dot(v, hw), 1e-9 * std::abs(dot(hv, w)));

  const double step = 1e-6;
  ScalarField up = u, dn = u;
  for (std::size_t k = 0; k < u.size(); ++k) {
    up[k] += step * v[k];
    dn[k] -= step * v[k];
  }
  const ScalarField gp = gradient_total(up, p), gm = gradient_total(dn, p);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double fd = (gp[k] - gm[k]) / (2 * step);
    num += (fd - hv[k]) * (fd - hv[k]);
    den += hv[k] * hv[k];
  }
  EXPECT_LT(std::sqrt(num / den), 1e-5);
}

TEST(Hessian, DiagonalMatchesUnitVectors) {
  auto d = Domain::create(24);
  const ScalarField u = smooth_random(d, 4);
  const EnergyParams p = all_terms(0.1, u);
  const EnergyState s(u, p);
  std::vector<double> diag(u.size());
  s.hessian_diagonal(diag);
  for (std::size_t k : {std::size_t{24 * 12 + 12}, std::size_t{24 * 10 + 7}}) {
    ScalarField e(d, 0.0);
    e[k] = 1.0;
    EXPECT_NEAR(hessian_vec(u, p, e)[k], diag[k], 1e-8 * std::abs(diag[k]));
  }
}

TEST(EnergyParams, Validation) {
  EnergyParams p;
  p.epsilon = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = EnergyParams{};
  p.length_target = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  EXPECT_NO_THROW(EnergyParams{}.validate());
  EXPECT_EQ(EnergyParams{}.length_prefactor(), 0.0);
}

}  // namespace
}  // namespace elastica
