#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "elastica/grid.hpp"

namespace elastica {
namespace {

ScalarField fill(const DomainPtr& d, auto&& f) {
  ScalarField u(d, 0.0);
  const GridSpec& g = d->grid();
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) u.at(i, j) = f(g.coord(i), g.coord(j));
  }
  return u;
}

TEST(BuildGrid, SpacingFromNodeCount) {
  EXPECT_DOUBLE_EQ(build_grid(201, 1.25).h, 0.0125);
  EXPECT_NEAR(build_grid(256, 1.25).h, 0.009804, 1e-6);
}

TEST(BuildGrid, RejectsTooFewNodesOrSmallExtent) {
  EXPECT_THROW(build_grid(3, 1.25), std::invalid_argument);
  EXPECT_THROW(build_grid(64, 1.0), std::invalid_argument);
  EXPECT_THROW(build_grid(64, 0.9), std::invalid_argument);
}

TEST(ClassifyNodes, CenterFreeCornerClamped) {
  const GridSpec g = build_grid(201, 1.25);
  const NodeMask m = classify_nodes(g);
  EXPECT_TRUE(m.is_free(g.index(100, 100)));
  EXPECT_FALSE(m.is_free(g.index(200, 100)));  // (1.25, 0)
  EXPECT_FALSE(m.is_free(g.index(0, 0)));
}

TEST(ClassifyNodes, FreeFractionApproachesAreaRatio) {
  const GridSpec g = build_grid(256, 1.25);
  const double frac = static_cast<double>(classify_nodes(g).free_count()) / g.node_count();
  // FREE nodes fill the disk of radius 1 - h.
  const double r = 1.0 - g.h;
  EXPECT_NEAR(frac / (std::numbers::pi * r * r / (4 * 1.25 * 1.25)), 1.0, 0.01);
}

TEST(ClassifyNodes, RowRangesCoverExactlyTheFreeNodes) {
  auto d = Domain::create(97, 1.1);
  std::size_t counted = 0;
  for (int j = 0; j < d->n(); ++j) {
    const auto r = d->free_rows()[j];
    for (int i = 0; i < d->n(); ++i) {
      const bool in = i >= r.begin && i < r.end;
      EXPECT_EQ(in, d->mask().is_free(d->grid().index(i, j)));
      counted += in;
    }
  }
  EXPECT_EQ(counted, d->free_count());
}

TEST(Laplacian, ConstantIsZero) {
  auto d = Domain::create(64);
  const ScalarField lap = laplacian(ScalarField(d, -1.0));
  for (double v : lap.values()) EXPECT_EQ(v, 0.0);
}

TEST(Laplacian, QuadraticIsExact) {
  auto d = Domain::create(101);
  const ScalarField lap = laplacian(fill(d, [](double x, double y) { return x * x + y * y; }));
  for (std::size_t k = 0; k < lap.size(); ++k) {
    if (d->mask().is_free(k)) EXPECT_NEAR(lap[k], 4.0, 1e-9);
    else EXPECT_EQ(lap[k], 0.0);
  }
}

TEST(Laplacian, SecondOrderOnSine) {
  auto max_err = [](int n) {
    auto d = Domain::create(n);
    const ScalarField lap = laplacian(fill(d, [](double x, double) { return std::sin(std::numbers::pi * x); }));
    double err = 0.0;
    const GridSpec& g = d->grid();
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (!d->mask().is_free(g.index(i, j))) continue;
        const double exact = -std::numbers::pi * std::numbers::pi * std::sin(std::numbers::pi * g.coord(i));
        err = std::max(err, std::abs(lap.at(i, j) - exact));
      }
    }
    return err;
  };
  const double order = std::log2(max_err(101) / max_err(201));
  EXPECT_GE(order, 1.9);
}

TEST(Gradient, LinearIsExact) {
  auto d = Domain::create(64);
  const VectorField g = gradient(fill(d, [](double x, double) { return 3.0 * x; }));
  for (std::size_t k = 0; k < g.x.size(); ++k) {
    if (!d->mask().is_free(k)) {
      EXPECT_EQ(g.x[k], 0.0);
      continue;
    }
    EXPECT_NEAR(g.x[k], 3.0, 1e-12);
    EXPECT_NEAR(g.y[k], 0.0, 1e-12);
  }
}

TEST(Gradient, ProfileSlopeAtInterface) {
  const double eps = 0.025, R = 0.5;
  const double h = eps / 4;
  const int n = static_cast<int>(std::ceil(2.1 / h)) + 1;
  auto d = Domain::create(n, 0.5 * (n - 1) * h);
  const ScalarField u =
      fill(d, [&](double x, double y) { return std::tanh((R - std::hypot(x, y)) / (std::sqrt(2.0) * eps)); });
  const VectorField g = gradient(u);
  const GridSpec& gs = d->grid();
  // Node closest to (R, 0).
  const int i = static_cast<int>(std::lround((R + gs.extent) / h));
  const int j = static_cast<int>(std::lround(gs.extent / h));
  const double r = std::hypot(gs.coord(i), gs.coord(j));
  const double expected = (1.0 - std::pow(std::tanh((R - r) / (std::sqrt(2.0) * eps)), 2)) / (std::sqrt(2.0) * eps);
  EXPECT_NEAR(g.norm_at(gs.index(i, j)) / expected, 1.0, 0.02);
  EXPECT_NEAR(expected * std::sqrt(2.0) * eps, 1.0, 0.02);
}

TEST(Integrate, DiskArea) {
  auto d = Domain::create(256);
  const double r = 1.0 - d->h();
  EXPECT_NEAR(integrate(ScalarField(d, 1.0)) / (std::numbers::pi * r * r), 1.0, 0.01);
  EXPECT_EQ(integrate(ScalarField(d, 0.0)), 0.0);
}

TEST(Integrate, OddFunctionVanishes) {
  auto d = Domain::create(256);
  EXPECT_LT(std::abs(integrate(fill(d, [](double x, double) { return x; }))), 10 * d->h());
}

TEST(Operators, Linear) {
  auto d = Domain::create(48);
  const ScalarField u = fill(d, [](double x, double y) { return std::sin(3 * x) * y; });
  const ScalarField v = fill(d, [](double x, double y) { return std::exp(x) - y * y; });
  ScalarField w(d, 0.0);
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = 2.0 * u[k] - 0.5 * v[k];
  const ScalarField lu = laplacian(u), lv = laplacian(v), lw = laplacian(w);
  for (std::size_t k = 0; k < w.size(); ++k) EXPECT_NEAR(lw[k], 2.0 * lu[k] - 0.5 * lv[k], 1e-8);
}

TEST(Integrate, Monotone) {
  auto d = Domain::create(48);
  const ScalarField f = fill(d, [](double x, double y) { return x * y; });
  ScalarField g = f;
  for (auto& v : g.data()) v += 0.1;
  EXPECT_LE(integrate(f), integrate(g));
}

TEST(ScalarField, RejectsWrongSize) {
  auto d = Domain::create(32);
  EXPECT_THROW(ScalarField(d, std::vector<double>(10, 0.0)), std::invalid_argument);
}

}  // namespace
}  // namespace elastica
