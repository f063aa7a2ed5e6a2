#include "elastica/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace elastica {

GridSpec build_grid(int n, double extent) {
  if (n < 16) {
    throw std::invalid_argument("grid: n must be at least 16, got " + std::to_string(n));
  }
  if (!(extent > 1.0) || !std::isfinite(extent)) {
    throw std::invalid_argument("grid: extent must exceed 1 so the unit disk is contained");
  }
  GridSpec g;
  g.n = n;
  g.extent = extent;
  g.h = 2.0 * extent / (n - 1);
  return g;
}

std::size_t NodeMask::free_count() const {
  return static_cast<std::size_t>(
      std::count(classes.begin(), classes.end(), NodeClass::Free));
}

NodeMask classify_nodes(const GridSpec& grid) {
  NodeMask mask;
  mask.classes.assign(grid.node_count(), NodeClass::Clamped);
  const double limit = 1.0 - grid.h;
  for (int j = 0; j < grid.n; ++j) {
    const double y = grid.coord(j);
    for (int i = 0; i < grid.n; ++i) {
      const double x = grid.coord(i);
      if (std::hypot(x, y) < limit) mask.classes[grid.index(i, j)] = NodeClass::Free;
    }
  }
  return mask;
}

Domain::Domain(GridSpec grid) : grid_(grid), mask_(classify_nodes(grid)) {
  rows_.resize(grid_.n);
  for (int j = 0; j < grid_.n; ++j) {
    int begin = grid_.n;
    int end = 0;
    for (int i = 0; i < grid_.n; ++i) {
      if (mask_.is_free(grid_.index(i, j))) {
        begin = std::min(begin, i);
        end = i + 1;
      }
    }
    if (begin >= end) begin = end = 0;
    rows_[j] = {begin, end};
    free_count_ += static_cast<std::size_t>(end - begin);
  }
  // A row of a disk is convex, so the range covers exactly the FREE nodes.
  if (free_count_ != mask_.free_count()) {
    throw std::logic_error("grid: FREE nodes are not row-contiguous");
  }
  if (free_count_ == 0) throw std::invalid_argument("grid: no FREE nodes");
}

std::shared_ptr<const Domain> Domain::create(int n, double extent) {
  return std::make_shared<const Domain>(build_grid(n, extent));
}

ScalarField::ScalarField(DomainPtr domain, double fill)
    : domain_(std::move(domain)), values_(domain_->grid().node_count(), fill) {}

ScalarField::ScalarField(DomainPtr domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  if (values_.size() != domain_->grid().node_count()) {
    throw std::invalid_argument("field: value count does not match grid");
  }
}

void ScalarField::clamp(double value) {
  const auto& mask = domain_->mask();
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!mask.is_free(k)) values_[k] = value;
  }
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField make_phase_field(const DomainPtr& domain) { return ScalarField(domain, -1.0); }

double VectorField::norm_at(std::size_t k) const { return std::hypot(x[k], y[k]); }

namespace stencil {

void laplacian(const Domain& d, std::span<const double> in, std::span<double> out) {
  const int n = d.n();
  const double inv_h2 = 1.0 / (d.h() * d.h());
  const auto rows = d.free_rows();
  for (int j = 0; j < n; ++j) {
    const auto [b, e] = rows[j];
    const std::size_t base = static_cast<std::size_t>(j) * n;
    for (int i = b; i < e; ++i) {
      const std::size_t k = base + i;
      out[k] = (in[k + 1] + in[k - 1] + in[k + n] + in[k - n] - 4.0 * in[k]) * inv_h2;
    }
  }
}

void central_gradient(const Domain& d, std::span<const double> in, std::span<double> gx,
                      std::span<double> gy) {
  const int n = d.n();
  const double inv_2h = 0.5 / d.h();
  const auto rows = d.free_rows();
  for (int j = 0; j < n; ++j) {
    const auto [b, e] = rows[j];
    const std::size_t base = static_cast<std::size_t>(j) * n;
    for (int i = b; i < e; ++i) {
      const std::size_t k = base + i;
      gx[k] = (in[k + 1] - in[k - 1]) * inv_2h;
      gy[k] = (in[k + n] - in[k - n]) * inv_2h;
    }
  }
}

void central_divergence_adjoint(const Domain& d, std::span<const double> a,
                                std::span<const double> b, std::span<double> out) {
  const int n = d.n();
  const double inv_2h = 0.5 / d.h();
  const auto rows = d.free_rows();
  for (int j = 0; j < n; ++j) {
    const auto [rb, re] = rows[j];
    const std::size_t base = static_cast<std::size_t>(j) * n;
    for (int i = rb; i < re; ++i) {
      const std::size_t k = base + i;
      out[k] = (a[k - 1] - a[k + 1] + b[k - n] - b[k + n]) * inv_2h;
    }
  }
}

double free_sum(const Domain& d, std::span<const double> f) {
  const int n = d.n();
  const auto rows = d.free_rows();
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto [b, e] = rows[j];
    const std::size_t base = static_cast<std::size_t>(j) * n;
    for (int i = b; i < e; ++i) s += f[base + i];
  }
  return s;
}

double free_dot(const Domain& d, std::span<const double> a, std::span<const double> b) {
  const int n = d.n();
  const auto rows = d.free_rows();
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const auto [rb, re] = rows[j];
    const std::size_t base = static_cast<std::size_t>(j) * n;
    for (int i = rb; i < re; ++i) s += a[base + i] * b[base + i];
  }
  return s;
}

}  // namespace stencil

ScalarField laplacian(const ScalarField& u) {
  ScalarField out(u.domain_ptr(), 0.0);
  stencil::laplacian(u.domain(), u.values(), out.values());
  return out;
}

VectorField gradient(const ScalarField& u) {
  VectorField g{u.domain_ptr(), std::vector<double>(u.size(), 0.0),
                std::vector<double>(u.size(), 0.0)};
  stencil::central_gradient(u.domain(), u.values(), g.x, g.y);
  return g;
}

double integrate(const ScalarField& f) {
  const double h = f.domain().h();
  return h * h * stencil::free_sum(f.domain(), f.values());
}

}  // namespace elastica
