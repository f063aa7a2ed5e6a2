#include "elastica/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "elastica/double_well.hpp"

namespace elastica {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInf = std::numeric_limits<double>::infinity();

double norm(Point p) { return std::hypot(p[0], p[1]); }
Point sub(Point a, Point b) { return {a[0] - b[0], a[1] - b[1]}; }
double cross(Point a, Point b) { return a[0] * b[1] - a[1] * b[0]; }

double point_segment_distance(Point p, Point a, Point b) {
  const Point ab = sub(b, a);
  const Point ap = sub(p, a);
  const double len2 = ab[0] * ab[0] + ab[1] * ab[1];
  double t = len2 > 0.0 ? (ap[0] * ab[0] + ap[1] * ab[1]) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(ap[0] - t * ab[0], ap[1] - t * ab[1]);
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const double d1 = cross(sub(b, a), sub(c, a));
  const double d2 = cross(sub(b, a), sub(d, a));
  const double d3 = cross(sub(d, c), sub(a, c));
  const double d4 = cross(sub(d, c), sub(b, c));
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

double segment_segment_distance(Point a, Point b, Point c, Point d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

bool polygon_contains(const Polyline& p, Point x) {
  bool inside = false;
  const auto& v = p.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i][1] > x[1]) != (v[j][1] > x[1])) {
      const double xc = v[j][0] + (x[1] - v[j][1]) * (v[i][0] - v[j][0]) / (v[i][1] - v[j][1]);
      if (x[0] < xc) inside = !inside;
    }
  }
  return inside;
}

template <typename F>
void for_each_segment(const Polyline& p, F&& f) {
  const auto& v = p.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) f(v[i], v[(i + 1) % v.size()]);
}

double circle_segment_distance(const Circle& c, Point a, Point b) {
  const double dmin = point_segment_distance(c.center, a, b);
  const double dmax = std::max(norm(sub(a, c.center)), norm(sub(b, c.center)));
  if (dmin >= c.radius) return dmin - c.radius;
  if (dmax <= c.radius) return c.radius - dmax;
  return 0.0;
}

double pair_distance(const CurveComponent& a, const CurveComponent& b) {
  if (const auto* ca = std::get_if<Circle>(&a)) {
    if (const auto* cb = std::get_if<Circle>(&b)) {
      const double dc = norm(sub(ca->center, cb->center));
      if (dc >= ca->radius + cb->radius) return dc - ca->radius - cb->radius;
      const double nested = std::abs(ca->radius - cb->radius) - dc;
      return std::max(nested, 0.0);
    }
    double best = kInf;
    for_each_segment(std::get<Polyline>(b),
                     [&](Point p, Point q) { best = std::min(best, circle_segment_distance(*ca, p, q)); });
    return best;
  }
  if (std::holds_alternative<Circle>(b)) return pair_distance(b, a);
  double best = kInf;
  for_each_segment(std::get<Polyline>(a), [&](Point p, Point q) {
    for_each_segment(std::get<Polyline>(b), [&](Point r, Point s) {
      best = std::min(best, segment_segment_distance(p, q, r, s));
    });
  });
  return best;
}

int orientation_of(const CurveComponent& c) {
  return std::visit([](const auto& x) { return x.orientation; }, c);
}

}  // namespace

double optimal_profile(double r) { return std::tanh(r * kInvSqrt2); }

double optimal_profile_derivative(double r) {
  const double q = optimal_profile(r);
  return kInvSqrt2 * (1.0 - q * q);
}

double c0_constant() { return kC0; }

double cutoff(double r) {
  const double a = std::abs(r);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double s = a - 1.0;
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

void CurveSpec::validate() const {
  if (components.empty()) throw std::invalid_argument("curve spec: no components");
  for (const auto& c : components) {
    if (const auto* circle = std::get_if<Circle>(&c)) {
      if (!(circle->radius > 0.0)) throw std::invalid_argument("curve spec: circle radius must be positive");
      if (norm(circle->center) + circle->radius >= 1.0) {
        throw std::invalid_argument("curve spec: circle leaves the unit disk");
      }
    } else {
      const auto& p = std::get<Polyline>(c);
      if (p.vertices.size() < 3) throw std::invalid_argument("curve spec: polyline needs 3 vertices");
      for (const auto& v : p.vertices) {
        if (norm(v) >= 1.0) throw std::invalid_argument("curve spec: polyline leaves the unit disk");
      }
    }
    const int o = orientation_of(c);
    if (o != 1 && o != -1) throw std::invalid_argument("curve spec: orientation must be +1 or -1");
  }
  if (!(min_separation() > 0.0)) throw std::invalid_argument("curve spec: components intersect");
}

double CurveSpec::min_separation() const {
  double best = kInf;
  for (std::size_t i = 0; i < components.size(); ++i) {
    for (std::size_t j = i + 1; j < components.size(); ++j) {
      best = std::min(best, pair_distance(components[i], components[j]));
    }
  }
  return best;
}

double CurveSpec::distance_to_container() const {
  double best = kInf;
  for (const auto& c : components) {
    if (const auto* circle = std::get_if<Circle>(&c)) {
      best = std::min(best, 1.0 - norm(circle->center) - circle->radius);
    } else {
      for (const auto& v : std::get<Polyline>(c).vertices) best = std::min(best, 1.0 - norm(v));
    }
  }
  return best;
}

CurveSpec CurveSpec::translated(Point offset) const {
  CurveSpec out = *this;
  for (auto& c : out.components) {
    if (auto* circle = std::get_if<Circle>(&c)) {
      circle->center[0] += offset[0];
      circle->center[1] += offset[1];
    } else {
      for (auto& v : std::get<Polyline>(c).vertices) {
        v[0] += offset[0];
        v[1] += offset[1];
      }
    }
  }
  return out;
}

double component_distance(const CurveComponent& c, Point x, bool* inside) {
  if (const auto* circle = std::get_if<Circle>(&c)) {
    const double r = norm(sub(x, circle->center));
    if (inside) *inside = r < circle->radius;
    return std::abs(r - circle->radius);
  }
  const auto& p = std::get<Polyline>(c);
  double best = kInf;
  for_each_segment(p, [&](Point a, Point b) { best = std::min(best, point_segment_distance(x, a, b)); });
  if (inside) *inside = polygon_contains(p, x);
  return best;
}

double signed_distance(const CurveSpec& spec, Point x) {
  double best = kInf;
  double sign = -1.0;
  for (const auto& c : spec.components) {
    bool inside = false;
    const double d = component_distance(c, x, &inside);
    if (d < best) {
      best = d;
      sign = (inside ? 1.0 : -1.0) * orientation_of(c);
    }
  }
  return sign * best;
}

void RecoveryParams::validate_for(const CurveSpec& spec) const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("recovery: epsilon must be positive");
  if (!(epsilon < delta / 4.0)) {
    throw std::invalid_argument("recovery: need epsilon < delta/4 (epsilon=" +
                                std::to_string(epsilon) + ", delta=" + std::to_string(delta) + ")");
  }
  if (!(delta < 0.5 * spec.min_separation())) {
    throw std::invalid_argument("recovery: delta must be below half the component separation");
  }
}

RecoveryParams default_recovery_params(const CurveSpec& spec, double epsilon) {
  RecoveryParams p;
  p.epsilon = epsilon;
  p.delta = std::min(8.0 * epsilon, 0.45 * spec.min_separation());
  return p;
}

double recovery_profile(double r, const RecoveryParams& params) {
  const double eta = cutoff(2.0 * r / params.delta);
  const double sgn = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
  if (eta == 0.0) return sgn;
  return eta * optimal_profile(r / params.epsilon) + sgn * (1.0 - eta);
}

ScalarField build_recovery_field(const CurveSpec& spec, const RecoveryParams& params,
                                 const DomainPtr& domain) {
  spec.validate();
  params.validate_for(spec);
  if (spec.distance_to_container() < params.delta) {
    throw std::invalid_argument("recovery: curves must stay at least delta away from the unit circle");
  }
  ScalarField u = make_phase_field(domain);
  const auto& g = domain->grid();
  const auto rows = domain->free_rows();
  for (int j = 0; j < g.n; ++j) {
    for (int i = rows[j].begin; i < rows[j].end; ++i) {
      const double d = signed_distance(spec, {g.coord(i), g.coord(j)});
      u.at(i, j) = recovery_profile(d, params);
    }
  }
  return u;
}

}  // namespace elastica
