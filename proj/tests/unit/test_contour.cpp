#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "elastica/contour.hpp"

namespace elastica {
namespace {

ScalarField disk_field(const DomainPtr& d, std::initializer_list<std::array<double, 4>> disks) {
  // Each entry: x, y, r, sign. Positive disks add material, negative ones carve holes.
  ScalarField u(d, -1.0);
  const GridSpec& g = d->grid();
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (!d->mask().is_free(g.index(i, j))) continue;
      double v = -1.0;
      for (const auto& c : disks) {
        const double s = std::tanh((c[2] - std::hypot(g.coord(i) - c[0], g.coord(j) - c[1])) / 0.03);
        v = c[3] > 0 ? std::max(v, s) : std::min(v, -s);
      }
      u.at(i, j) = v;
    }
  }
  return u;
}

TEST(PolylineGeometry, Square) {
  const std::vector<Point> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  EXPECT_DOUBLE_EQ(polyline_length(sq), 4.0);
  EXPECT_DOUBLE_EQ(signed_area(sq), 1.0);
  EXPECT_NEAR(turning_number(sq), 1.0, 1e-12);
  const std::vector<Point> rev(sq.rbegin(), sq.rend());
  EXPECT_DOUBLE_EQ(signed_area(rev), -1.0);
  EXPECT_NEAR(turning_number(rev), -1.0, 1e-12);
}

TEST(PolylineGeometry, FigureEightHasZeroTurning) {
  std::vector<Point> eight;
  for (int k = 0; k < 200; ++k) {
    const double t = 2 * std::numbers::pi * k / 200;
    eight.push_back({std::sin(t), std::sin(t) * std::cos(t)});
  }
  EXPECT_NEAR(turning_number(eight), 0.0, 1e-9);
}

TEST(ExtractContour, CircleLengthAndOrientation) {
  auto d = Domain::create(201);
  const Contour c = extract_contour(disk_field(d, {{0.0, 0.0, 0.5, 1}}));
  ASSERT_EQ(c.components.size(), 1u);
  EXPECT_NEAR(c.components[0].length / (std::numbers::pi), 1.0, 1e-3);
  EXPECT_NEAR(c.components[0].turning_number, 1.0, 1e-9);
  EXPECT_NEAR(c.components[0].signed_area / (std::numbers::pi * 0.25), 1.0, 2e-3);
  const ContourMetrics m = contour_metrics(c);
  EXPECT_EQ(m.component_count, 1);
  EXPECT_NEAR(m.max_radius, 0.5, 2e-3);
}

TEST(ExtractContour, HoleIsNegativelyOriented) {
  auto d = Domain::create(161);
  const Contour c = extract_contour(disk_field(d, {{0.0, 0.0, 0.6, 1}, {0.0, 0.0, 0.2, -1}}));
  ASSERT_EQ(c.components.size(), 2u);
  double turning = 0.0;
  int negative = 0;
  for (const auto& comp : c.components) {
    turning += comp.turning_number;
    negative += comp.turning_number < 0;
  }
  EXPECT_EQ(negative, 1);
  EXPECT_NEAR(turning, 0.0, 1e-9);
}

TEST(ExtractContour, SeparateDisksAreSeparateComponents) {
  auto d = Domain::create(161);
  const ContourMetrics m =
      contour_metrics(extract_contour(disk_field(d, {{-0.4, 0.0, 0.2, 1}, {0.4, 0.0, 0.2, 1}, {0.0, 0.5, 0.15, 1}})));
  EXPECT_EQ(m.component_count, 3);
  EXPECT_NEAR(m.length / (2 * std::numbers::pi * 0.55), 1.0, 5e-3);
  for (double t : m.turning_numbers) EXPECT_NEAR(t, 1.0, 1e-9);
}

TEST(ExtractContour, EmptyForPureState) {
  auto d = Domain::create(32);
  EXPECT_TRUE(extract_contour(ScalarField(d, -1.0)).components.empty());
  EXPECT_EQ(contour_metrics(Contour{}).component_count, 0);
}

TEST(ExtractContour, TranslationKeepsLength) {
  auto d = Domain::create(161);
  const double a = contour_metrics(extract_contour(disk_field(d, {{0.0, 0.0, 0.3, 1}}))).length;
  const double b = contour_metrics(extract_contour(disk_field(d, {{0.123, -0.077, 0.3, 1}}))).length;
  EXPECT_NEAR(a / b, 1.0, 2e-3);
}

}  // namespace
}  // namespace elastica
