#pragma once

// Optimal 1-D profile, cut-off interpolation and recovery-sequence phase
// fields built from the signed distance to a collection of closed curves.

#include <array>
#include <variant>
#include <vector>

#include "elastica/grid.hpp"

namespace elastica {

using Point = std::array<double, 2>;

/// tanh(r / sqrt(2)): heteroclinic solution of -q'' + W'(q) = 0.
double optimal_profile(double r);
double optimal_profile_derivative(double r);

/// 2 sqrt(2) / 3.
double c0_constant();

/// Smooth symmetric bump: 1 on [-1, 1], 0 for |r| >= 2, non-increasing in |r|
/// with a C^2 quintic transition.
double cutoff(double r);

struct Circle {
  Point center{0.0, 0.0};
  double radius = 0.5;
  int orientation = +1;  // +1: interior is inside, -1: hole
};

struct Polyline {
  std::vector<Point> vertices;  // closed; last vertex connects to the first
  int orientation = +1;
};

using CurveComponent = std::variant<Circle, Polyline>;

struct CurveSpec {
  std::vector<CurveComponent> components;

  /// Throws std::invalid_argument unless components are pairwise disjoint,
  /// non-degenerate and inside the open unit disk.
  void validate() const;
  /// Smallest distance between two distinct components; +inf for one component.
  double min_separation() const;
  /// Smallest distance from any component to the unit circle.
  double distance_to_container() const;
  CurveSpec translated(Point offset) const;
};

/// Unsigned distance from x to one component and whether x lies inside it.
double component_distance(const CurveComponent& c, Point x, bool* inside = nullptr);

/// Positive inside the phase region. The sign comes from the nearest
/// component: inside it means `orientation`, outside means `-orientation`.
double signed_distance(const CurveSpec& spec, Point x);

struct RecoveryParams {
  double epsilon = 0.025;
  double delta = 0.2;

  void validate_for(const CurveSpec& spec) const;
};

/// delta = 8 eps, capped at 0.45 times the minimum component separation.
RecoveryParams default_recovery_params(const CurveSpec& spec, double epsilon);

/// Cut-off profile q_eps(r) = eta(2r/delta) q(r/eps) + sgn(r) (1 - eta(2r/delta)).
double recovery_profile(double r, const RecoveryParams& params);

/// u(x) = q_eps(d(x)) at FREE nodes, -1 at CLAMPED nodes. Rejects curve
/// collections closer than delta to the unit circle.
ScalarField build_recovery_field(const CurveSpec& spec, const RecoveryParams& params,
                                 const DomainPtr& domain);

}  // namespace elastica
