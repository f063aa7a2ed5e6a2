#include "elastica/contour.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace elastica {

namespace {

constexpr std::int64_t kNone = -1;

struct Segment {
  std::int64_t from = kNone;  // edge ids
  std::int64_t to = kNone;
};

double cross(Point a, Point b) { return a[0] * b[1] - a[1] * b[0]; }

}  // namespace

double polyline_length(const std::vector<Point>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    s += std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  return s;
}

double turning_number(const std::vector<Point>& v) {
  const std::size_t m = v.size();
  if (m < 3) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Point& a = v[(i + m - 1) % m];
    const Point& b = v[i];
    const Point& c = v[(i + 1) % m];
    const Point e1{b[0] - a[0], b[1] - a[1]};
    const Point e2{c[0] - b[0], c[1] - b[1]};
    total += std::atan2(cross(e1, e2), e1[0] * e2[0] + e1[1] * e2[1]);
  }
  return total / kTwoPi;
}

double signed_area(const std::vector<Point>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * s;
}

Contour extract_contour(const ScalarField& u) {
  const GridSpec& g = u.grid();
  const int n = g.n;
  const std::size_t size = g.node_count();
  // Edge ids: 2k = edge (i,j)-(i+1,j), 2k+1 = edge (i,j)-(i,j+1), k = index(i,j).
  std::vector<Point> crossing(2 * size);
  std::vector<std::int64_t> next(2 * size, kNone);
  auto pos = [&](double v) { return v > 0.0; };

  auto edge_point = [&](std::int64_t e) {
    const std::size_t k = static_cast<std::size_t>(e / 2);
    const int i = static_cast<int>(k % n), j = static_cast<int>(k / n);
    const bool horizontal = e % 2 == 0;
    const std::size_t k2 = horizontal ? k + 1 : k + n;
    const double va = u[k], vb = u[k2];
    const double t = va / (va - vb);
    const double x = g.coord(i), y = g.coord(j);
    return horizontal ? Point{x + t * g.h, y} : Point{x, y + t * g.h};
  };

  std::vector<Segment> segments;
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      const std::size_t k0 = g.index(i, j), k1 = k0 + 1, k2 = k0 + n + 1, k3 = k0 + n;
      const double v[4] = {u[k0], u[k1], u[k2], u[k3]};
      const bool s[4] = {pos(v[0]), pos(v[1]), pos(v[2]), pos(v[3])};
      if (s[0] == s[1] && s[1] == s[2] && s[2] == s[3]) continue;
      // Cell edges counter-clockwise: bottom, right, top, left; edge e joins corners e and e+1.
      const std::int64_t ids[4] = {static_cast<std::int64_t>(2 * k0), static_cast<std::int64_t>(2 * k1 + 1),
                                   static_cast<std::int64_t>(2 * k3), static_cast<std::int64_t>(2 * k0 + 1)};
      // Each segment cuts off one corner c between edges c-1 and c. Walking
      // from edge c to edge c-1 keeps corner c on the left.
      auto cut = [&](int c) {
        const int ea = (c + 3) % 4, eb = c;
        Segment sg{ids[eb], ids[ea]};
        if (!s[c]) std::swap(sg.from, sg.to);
        segments.push_back(sg);
      };
      const int npos = s[0] + s[1] + s[2] + s[3];
      if (npos == 1 || npos == 3) {
        for (int c = 0; c < 4; ++c) {
          if (s[c] == (npos == 1)) cut(c);
        }
      } else if (s[0] == s[2]) {
        // Saddle: the cell average decides which diagonal pair is connected.
        const bool center = pos(0.25 * (v[0] + v[1] + v[2] + v[3]));
        if (center == s[0]) {
          cut(1);
          cut(3);
        } else {
          cut(0);
          cut(2);
        }
      } else {
        // Two adjacent corners positive: the segment spans opposite edges.
        const bool vertical_split = s[0] == s[3];  // left pair vs right pair
        Segment sg;
        if (vertical_split) {
          sg = {ids[0], ids[2]};  // bottom -> top keeps the left pair on the left
          if (!s[0]) std::swap(sg.from, sg.to);
        } else {
          sg = {ids[1], ids[3]};  // right -> left keeps the bottom pair on the left
          if (!s[0]) std::swap(sg.from, sg.to);
        }
        segments.push_back(sg);
      }
    }
  }

  for (const auto& sg : segments) next[sg.from] = sg.to;
  for (const auto& sg : segments) {
    crossing[sg.from] = edge_point(sg.from);
    crossing[sg.to] = edge_point(sg.to);
  }

  Contour out;
  std::vector<char> visited(2 * size, 0);
  const double tiny = 1e-12 * g.h;
  for (const auto& sg : segments) {
    if (visited[sg.from]) continue;
    ContourComponent comp;
    std::int64_t e = sg.from;
    while (e != kNone && !visited[e]) {
      visited[e] = 1;
      const Point p = crossing[e];
      if (comp.vertices.empty() || std::hypot(p[0] - comp.vertices.back()[0], p[1] - comp.vertices.back()[1]) > tiny) {
        comp.vertices.push_back(p);
      }
      e = next[e];
    }
    while (comp.vertices.size() > 1 &&
           std::hypot(comp.vertices.front()[0] - comp.vertices.back()[0],
                      comp.vertices.front()[1] - comp.vertices.back()[1]) <= tiny) {
      comp.vertices.pop_back();
    }
    if (comp.vertices.size() < 3) continue;
    comp.length = polyline_length(comp.vertices);
    comp.turning_number = turning_number(comp.vertices);
    comp.signed_area = signed_area(comp.vertices);
    out.components.push_back(std::move(comp));
  }
  return out;
}

ContourMetrics contour_metrics(const Contour& c) {
  ContourMetrics m;
  m.component_count = static_cast<int>(c.components.size());
  for (const auto& comp : c.components) {
    m.length += comp.length;
    m.turning_numbers.push_back(comp.turning_number);
    for (const auto& p : comp.vertices) m.max_radius = std::max(m.max_radius, std::hypot(p[0], p[1]));
  }
  return m;
}

}  // namespace elastica
