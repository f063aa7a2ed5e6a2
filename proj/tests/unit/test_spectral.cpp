#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "elastica/spectral.hpp"

namespace elastica {
namespace {

// Bump supported well inside the FREE disk, so restriction to FREE nodes is exact.
ScalarField bump(const DomainPtr& d) {
  ScalarField u(d, 0.0);
  const GridSpec& g = d->grid();
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double r2 = g.coord(i) * g.coord(i) + g.coord(j) * g.coord(j);
      if (r2 < 0.25) u.at(i, j) = std::pow(0.25 - r2, 3) * (1.0 + g.coord(i));
    }
  }
  return u;
}

TEST(SineSolver, EigenvalueMatchesStencil) {
  const int n = 33;
  const double h = 0.1;
  for (int p : {1, 7, 31}) {
    // -v'' of sin(pi p x / L) at an interior node with x = i h, L = (n - 1) h.
    const int i = 5;
    auto v = [&](int k) { return std::sin(std::numbers::pi * p * k / (n - 1.0)); };
    const double lap = -(v(i + 1) - 2 * v(i) + v(i - 1)) / (h * h);
    EXPECT_NEAR(lap, SineSolver::eigenvalue_1d(p, n, h) * v(i), 1e-9);
  }
}

TEST(SineSolver, InvertsLaplacian) {
  auto d = Domain::create(65, 1.1);
  const ScalarField u = bump(d);
  const ScalarField lap = laplacian(u);
  std::vector<double> rhs(u.size()), out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) rhs[k] = -lap[k];
  SineSolver solver(d, [](double lambda) { return 1.0 / lambda; });
  solver.apply(rhs, out);
  for (std::size_t k = 0; k < u.size(); ++k) EXPECT_NEAR(out[k], u[k], 1e-12);
}

TEST(SineSolver, BendingSymbolInvertsSquaredOperator) {
  auto d = Domain::create(65, 1.1);
  const double eps = 0.1, h = d->h(), shift = 50.0, scale = 3.0;
  const ScalarField u = bump(d);
  // A u = h^2 (shift u + scale J J u) with J = -eps Lap + 2 / eps.
  auto J = [&](const ScalarField& v) {
    ScalarField out = laplacian(v);
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = -eps * out[k] + 2.0 / eps * v[k];
    return out;
  };
  const ScalarField jju = J(J(u));
  std::vector<double> rhs(u.size()), out(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) rhs[k] = h * h * (shift * u[k] + scale * jju[k]);
  SineSolver solver(d, bending_symbol(h, shift, scale, eps, 2.0));
  solver.apply(rhs, out);
  for (std::size_t k = 0; k < u.size(); ++k) EXPECT_NEAR(out[k], u[k], 1e-12);
}

TEST(SineSolver, ZeroOnClampedNodesAndSymmetric) {
  auto d = Domain::create(33);
  SineSolver solver(d, bending_symbol(d->h(), 1e3, 10.0, 0.1, 2.0));
  std::vector<double> a(d->grid().node_count()), b(a.size()), sa(a.size()), sb(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k] = d->mask().is_free(k) ? std::sin(0.3 * k) : 0.0;
    b[k] = d->mask().is_free(k) ? std::cos(0.17 * k) : 0.0;
  }
  solver.apply(a, sa);
  solver.apply(b, sb);
  double ab = 0.0, ba = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!d->mask().is_free(k)) EXPECT_EQ(sa[k], 0.0);
    ab += sa[k] * b[k];
    ba += sb[k] * a[k];
  }
  EXPECT_NEAR(ab, ba, 1e-12 * std::abs(ab));
}

}  // namespace
}  // namespace elastica
