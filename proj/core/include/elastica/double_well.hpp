#pragma once

#include <cmath>

namespace elastica {

/// W(r) = (1 - r^2)^2 / 4
inline double double_well(double r) {
  const double a = 1.0 - r * r;
  return 0.25 * a * a;
}

inline double double_well_prime(double r) { return r * r * r - r; }

inline double double_well_second(double r) { return 3.0 * r * r - 1.0; }

inline double double_well_third(double r) { return 6.0 * r; }

/// c0 = integral of sqrt(2 W(s)) over [-1, 1] = 2 sqrt(2) / 3.
inline constexpr double kC0 = 0.94280904158206336587;  // 2*sqrt(2)/3

inline constexpr double kTwoPi = 6.28318530717958647692;

}  // namespace elastica
