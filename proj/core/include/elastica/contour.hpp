#pragma once

// Zero level set of a phase field by marching squares, and the sharp-interface
// diagnostics computed on it.

#include <vector>

#include "elastica/double_well.hpp"
#include "elastica/grid.hpp"
#include "elastica/profiles.hpp"

namespace elastica {

/// Closed polyline with u > 0 on its left. Outer boundaries therefore run
/// counter-clockwise (turning number +1) and holes clockwise (-1).
struct ContourComponent {
  std::vector<Point> vertices;  // closing edge implied
  double length = 0.0;
  double turning_number = 0.0;
  double signed_area = 0.0;
};

struct Contour {
  std::vector<ContourComponent> components;
};

/// Linear interpolation on every grid cell; saddle cells are resolved by the
/// sign of the cell average. Consecutive duplicate vertices are dropped.
Contour extract_contour(const ScalarField& u);

struct ContourMetrics {
  double length = 0.0;
  std::vector<double> turning_numbers;
  int component_count = 0;
  double max_radius = 0.0;
};

ContourMetrics contour_metrics(const Contour& c);

double polyline_length(const std::vector<Point>& closed);
/// Sum of exterior angles over 2 pi.
double turning_number(const std::vector<Point>& closed);
double signed_area(const std::vector<Point>& closed);

}  // namespace elastica
