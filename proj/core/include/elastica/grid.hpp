#pragma once

// Uniform tensor grid over [-extent, extent]^2 with the unit disk embedded.
// Nodes with |x| < 1 - h are FREE; every other node is CLAMPED and holds a
// fixed value (-1 for phase fields, 0 for perturbations).

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace elastica {

struct GridSpec {
  int n = 256;           // nodes per axis
  double extent = 1.25;  // half-width of the square
  double h = 2.5 / 255;  // node spacing

  double coord(int i) const { return -extent + h * i; }
  std::size_t node_count() const { return static_cast<std::size_t>(n) * n; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n + i; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Throws std::invalid_argument for n < 16 or extent <= 1.
GridSpec build_grid(int n, double extent = 1.25);

enum class NodeClass : std::uint8_t { Clamped = 0, Free = 1 };

struct NodeMask {
  std::vector<NodeClass> classes;

  bool is_free(std::size_t k) const { return classes[k] == NodeClass::Free; }
  std::size_t free_count() const;
};

NodeMask classify_nodes(const GridSpec& grid);

/// FREE nodes of row j are the contiguous range [begin, end).
struct RowRange {
  int begin = 0;
  int end = 0;
};

class Domain {
 public:
  explicit Domain(GridSpec grid);

  static std::shared_ptr<const Domain> create(int n, double extent = 1.25);

  const GridSpec& grid() const { return grid_; }
  const NodeMask& mask() const { return mask_; }
  std::span<const RowRange> free_rows() const { return rows_; }
  std::size_t free_count() const { return free_count_; }
  int n() const { return grid_.n; }
  double h() const { return grid_.h; }

 private:
  GridSpec grid_;
  NodeMask mask_;
  std::vector<RowRange> rows_;
  std::size_t free_count_ = 0;
};

using DomainPtr = std::shared_ptr<const Domain>;

class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(DomainPtr domain, double fill);
  ScalarField(DomainPtr domain, std::vector<double> values);

  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  const GridSpec& grid() const { return domain_->grid(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }
  double& at(int i, int j) { return values_[grid().index(i, j)]; }
  double at(int i, int j) const { return values_[grid().index(i, j)]; }

  std::size_t size() const { return values_.size(); }

  /// Sets every CLAMPED node to `value`.
  void clamp(double value);
  bool all_finite() const;

 private:
  DomainPtr domain_;
  std::vector<double> values_;
};

/// Phase field with value -1 everywhere.
ScalarField make_phase_field(const DomainPtr& domain);

struct VectorField {
  DomainPtr domain;
  std::vector<double> x;
  std::vector<double> y;

  double norm_at(std::size_t k) const;
};

/// 5-point Laplacian at FREE nodes, 0 at CLAMPED nodes. CLAMPED values of `u`
/// supply the exterior neighbours.
ScalarField laplacian(const ScalarField& u);

/// Central differences at FREE nodes, 0 at CLAMPED nodes.
VectorField gradient(const ScalarField& u);

/// h^2 times the sum over FREE nodes.
double integrate(const ScalarField& f);

namespace stencil {

// Raw kernels over full-grid arrays, used by the energy evaluators. Output is
// written at FREE nodes only; the caller owns zeroing of CLAMPED entries.

void laplacian(const Domain& d, std::span<const double> in, std::span<double> out);
void central_gradient(const Domain& d, std::span<const double> in, std::span<double> gx,
                      std::span<double> gy);
/// Adjoint of central_gradient restricted to FREE nodes: -(D_x a + D_y b) with
/// a, b zero outside FREE nodes.
void central_divergence_adjoint(const Domain& d, std::span<const double> a,
                                std::span<const double> b, std::span<double> out);
double free_sum(const Domain& d, std::span<const double> f);
double free_dot(const Domain& d, std::span<const double> a, std::span<const double> b);

}  // namespace stencil

}  // namespace elastica
