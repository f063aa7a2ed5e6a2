#include "elastica/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace elastica {

double SineSolver::eigenvalue_1d(int p, int n, double h) {
  const double s = std::sin(std::numbers::pi * p / (2.0 * (n - 1)));
  return 4.0 * s * s / (h * h);
}

SineSolver::SineSolver(DomainPtr domain, const std::function<double(double)>& symbol)
    : domain_(std::move(domain)), m_(domain_->n() - 2) {
  const int n = domain_->n();
  const double h = domain_->h();
  std::vector<double> lam(m_);
  for (int p = 0; p < m_; ++p) lam[p] = eigenvalue_1d(p + 1, n, h);
  // Forward and inverse DST-I each scale by 2 (m + 1) per axis.
  const double norm = 1.0 / (4.0 * (m_ + 1.0) * (m_ + 1.0));
  multiplier_.resize(static_cast<std::size_t>(m_) * m_);
  for (int q = 0; q < m_; ++q) {
    for (int p = 0; p < m_; ++p) multiplier_[static_cast<std::size_t>(q) * m_ + p] = norm * symbol(lam[p] + lam[q]);
  }
  buffer_ = static_cast<double*>(fftw_malloc(sizeof(double) * multiplier_.size()));
  if (!buffer_) throw std::bad_alloc();
  plan_ = fftw_plan_r2r_2d(m_, m_, buffer_, buffer_, FFTW_RODFT00, FFTW_RODFT00, FFTW_MEASURE);
  if (!plan_) {
    fftw_free(buffer_);
    throw std::runtime_error("sine solver: FFTW planning failed");
  }
}

SineSolver::~SineSolver() {
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  fftw_free(buffer_);
}

void SineSolver::apply(std::span<const double> in, std::span<double> out) {
  const int n = domain_->n();
  const auto& mask = domain_->mask();
  for (int j = 0; j < m_; ++j) {
    for (int i = 0; i < m_; ++i) {
      const std::size_t k = static_cast<std::size_t>(j + 1) * n + (i + 1);
      buffer_[static_cast<std::size_t>(j) * m_ + i] = mask.is_free(k) ? in[k] : 0.0;
    }
  }
  const auto plan = static_cast<fftw_plan>(plan_);
  fftw_execute(plan);
  for (std::size_t k = 0; k < multiplier_.size(); ++k) buffer_[k] *= multiplier_[k];
  fftw_execute(plan);
  std::fill(out.begin(), out.end(), 0.0);
  for (int j = 0; j < m_; ++j) {
    for (int i = 0; i < m_; ++i) {
      const std::size_t k = static_cast<std::size_t>(j + 1) * n + (i + 1);
      if (mask.is_free(k)) out[k] = buffer_[static_cast<std::size_t>(j) * m_ + i];
    }
  }
}

std::function<double(double)> bending_symbol(double h, double shift, double scale, double epsilon, double well) {
  return [=](double lambda) {
    const double a = epsilon * lambda + well / epsilon;
    return 1.0 / (h * h * (shift + scale * a * a));
  };
}

}  // namespace elastica
