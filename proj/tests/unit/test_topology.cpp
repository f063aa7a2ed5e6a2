#include <gtest/gtest.h>

#include <cmath>

#include "elastica/profiles.hpp"
#include "elastica/topology.hpp"

namespace elastica {
namespace {

constexpr double kEps = 0.04;

ScalarField field_for(const CurveSpec& s, const DomainPtr& d) {
  return build_recovery_field(s, default_recovery_params(s, kEps), d);
}

CurveSpec annulus() {
  CurveSpec s;
  s.components.emplace_back(Circle{{0.0, 0.0}, 0.7, +1});
  s.components.emplace_back(Circle{{0.0, 0.0}, 0.3, -1});
  return s;
}

EnergyParams params() {
  EnergyParams p;
  p.epsilon = kEps;
  return p;
}

TVSolveParams solver() {
  TVSolveParams t;
  t.max_iters = 3000;
  t.gap_tol = 1e-4;
  return t;
}

TEST(WeightedWinding, UnitWeightIsAbsoluteWinding) {
  auto d = Domain::create(97, 1.05);
  CurveSpec s;
  s.components.emplace_back(Circle{{0.1, 0.0}, 0.4, +1});
  const ScalarField u = field_for(s, d);
  EXPECT_NEAR(winding_weighted(u, ScalarField(d, 1.0), params()), winding_abs(u, params()), 1e-10);
  EXPECT_NEAR(winding_weighted(u, ScalarField(d, -1.0), params()), -winding_abs(u, params()), 1e-10);
}

TEST(ImprovedWinding, SingleCircleIsTwoPi) {
  auto d = Domain::create(129, 1.05);
  CurveSpec s;
  s.components.emplace_back(Circle{{0.0, 0.0}, 0.45, +1});
  const ImprovedWinding w = winding_improved(field_for(s, d), params(), solver());
  EXPECT_NEAR(w.value / kTwoPi, 1.0, 0.05);
}

TEST(ImprovedWinding, AnnulusCountsBothComponents) {
  auto d = Domain::create(129, 1.05);
  const ScalarField u = field_for(annulus(), d);
  const ImprovedWinding w = winding_improved(u, params(), solver());
  EXPECT_NEAR(w.value / kTwoPi, 2.0, 0.1);
  // The smoothed winding cancels the hole against the outer circle.
  EXPECT_LT(std::abs(winding_smooth(u, params())) / kTwoPi, 0.2);
}

TEST(MinimizePhi, WeakDualityAndBounds) {
  auto d = Domain::create(97, 1.05);
  const ScalarField u = field_for(annulus(), d);
  TVSolveParams t = solver();
  t.max_iters = 400;
  const PhiSolution s = minimize_phi(u, params(), t);
  EXPECT_LE(s.dual, s.primal + 1e-9 * std::abs(s.primal));
  EXPECT_GE(s.relative_gap, -1e-12);
  for (std::size_t k = 0; k < u.size(); ++k) {
    EXPECT_GE(s.phi[k], -1.0 - 1e-12);
    EXPECT_LE(s.phi[k], 1.0 + 1e-12);
    if (!d->mask().is_free(k)) EXPECT_EQ(s.phi[k], -1.0);
  }
  EXPECT_NEAR(assemble_A(s.phi, u, params(), t), s.primal, 1e-9 * std::abs(s.primal));
}

TEST(MinimizePhi, BeatsConstantCandidates) {
  auto d = Domain::create(97, 1.05);
  const ScalarField u = field_for(annulus(), d);
  const TVSolveParams t = solver();
  const PhiSolution s = minimize_phi(u, params(), t);
  ScalarField minus(d, -1.0), plus(d, 1.0);
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (!d->mask().is_free(k)) plus[k] = -1.0;
  }
  EXPECT_LE(s.primal, assemble_A(minus, u, params(), t));
  EXPECT_LE(s.primal, assemble_A(plus, u, params(), t));
}

TEST(MinimizePhi, ColdStartAgreesWithWarmStart) {
  auto d = Domain::create(97, 1.05);
  CurveSpec s;
  s.components.emplace_back(Circle{{0.0, 0.0}, 0.45, +1});
  const ScalarField u = field_for(s, d);
  TVSolveParams warm = solver(), cold = solver();
  cold.warm_start = false;
  cold.max_iters = 20000;
  const PhiSolution a = minimize_phi(u, params(), warm), b = minimize_phi(u, params(), cold);
  EXPECT_NEAR(a.primal, b.primal, 5e-3 * std::abs(a.primal));
}

TEST(TVSolveParams, Validation) {
  TVSolveParams t;
  t.max_iters = 0;
  EXPECT_THROW(t.validate(), std::invalid_argument);
  t = TVSolveParams{};
  t.gap_tol = 0.0;
  EXPECT_THROW(t.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace elastica
