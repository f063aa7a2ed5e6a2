#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "elastica/krylov.hpp"

namespace elastica {
namespace {

// Shifted negative Laplacian restricted to FREE nodes: symmetric positive definite.
LinearOperator shifted_laplacian(const DomainPtr& d, double shift) {
  return [d, shift](std::span<const double> x, std::span<double> y) {
    stencil::laplacian(*d, x, y);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = d->mask().is_free(k) ? shift * x[k] - y[k] : 0.0;
  };
}

std::vector<double> inverse_diagonal(const DomainPtr& d, double shift) {
  std::vector<double> inv(d->grid().node_count(), 0.0);
  const double c = 4.0 / (d->h() * d->h());
  for (std::size_t k = 0; k < inv.size(); ++k) inv[k] = d->mask().is_free(k) ? 1.0 / (shift + c) : 0.0;
  return inv;
}

TEST(TruncatedPcg, SolvesShiftedPoisson) {
  auto d = Domain::create(48);
  const auto op = shifted_laplacian(d, 10.0);
  std::vector<double> exact(d->grid().node_count(), 0.0), b(exact.size()), x(exact.size(), 0.0);
  for (std::size_t k = 0; k < exact.size(); ++k) exact[k] = d->mask().is_free(k) ? std::sin(0.37 * k) : 0.0;
  op(exact, b);
  PcgParams p;
  p.rel_tol = 1e-12;
  p.max_iter = 2000;
  const PcgResult r = truncated_pcg(*d, op, inverse_diagonal(d, 10.0), b, x, p);
  EXPECT_TRUE(r.converged);
  EXPECT_FALSE(r.negative_curvature);
  double err = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) err = std::max(err, std::abs(x[k] - exact[k]));
  EXPECT_LT(err, 1e-8);
}

TEST(TruncatedPcg, StopsOnNegativeCurvature) {
  auto d = Domain::create(24);
  const LinearOperator neg = [d](std::span<const double> x, std::span<double> y) {
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = d->mask().is_free(k) ? -x[k] : 0.0;
  };
  std::vector<double> inv(d->grid().node_count(), 1.0), b(inv.size(), 0.0), x(inv.size(), 0.0);
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = d->mask().is_free(k) ? 1.0 : 0.0;
  const PcgResult r = truncated_pcg(*d, neg, inv, b, x, PcgParams{});
  EXPECT_TRUE(r.negative_curvature);
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_TRUE(std::isfinite(x[k]));
}

// Residual x^3 + x - c, nodewise on FREE nodes.
class CubicSystem : public NewtonSystem {
 public:
  CubicSystem(DomainPtr d, double c) : d_(std::move(d)), c_(c) {}
  void linearize(std::span<const double> x, std::span<double> r) override {
    x_.assign(x.begin(), x.end());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = d_->mask().is_free(k) ? x[k] * x[k] * x[k] + x[k] - c_ : 0.0;
  }
  void apply_jacobian(std::span<const double> v, std::span<double> out) override {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = d_->mask().is_free(k) ? (3 * x_[k] * x_[k] + 1) * v[k] : 0.0;
  }
  void jacobian_diagonal(std::span<double> out) override {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = d_->mask().is_free(k) ? 3 * x_[k] * x_[k] + 1 : 0.0;
  }

 private:
  DomainPtr d_;
  double c_;
  std::vector<double> x_;
};

TEST(Newton, ConvergesQuadraticallyOnCubic) {
  auto d = Domain::create(16);
  CubicSystem sys(d, 10.0);  // root x = 2
  std::vector<double> x(d->grid().node_count(), 0.0);
  NewtonParams p;
  p.tol = 1e-12;
  const NewtonResult r = newton_solve(*d, sys, x, p);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 15);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (d->mask().is_free(k)) EXPECT_NEAR(x[k], 2.0, 1e-10);
    else EXPECT_EQ(x[k], 0.0);
  }
}

}  // namespace
}  // namespace elastica
