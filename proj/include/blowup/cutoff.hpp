#pragma once

#include <cmath>
#include <limits>

namespace blowup {

// C^2 smoothstep S(x) = 6x^5 - 15x^4 + 10x^3 on [0, 1]; |S'| <= 15/8, |S''| <= 5.78.
inline double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

inline double smoothstep_derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 30.0 * x * x * (1.0 - x) * (1.0 - x);
}

/// Even cutoff eta: 1 on [0, 1], 0 beyond 2, |eta'| + |eta''| <= 10.
inline double eta_profile(double t) { return 1.0 - smoothstep(std::abs(t) - 1.0); }
inline double eta_profile_derivative(double t) {
  const double s = smoothstep_derivative(std::abs(t) - 1.0);
  return t >= 0.0 ? -s : s;
}

/// Cutoff psi: 1 on [0, 3/4], 0 beyond 1, |psi'| + |psi''| <= 100.
inline double psi_profile(double r) { return 1.0 - smoothstep(4.0 * (r - 0.75)); }
inline double psi_profile_derivative(double r) { return -4.0 * smoothstep_derivative(4.0 * (r - 0.75)); }

/// eta(|x| / radius); an infinite radius means eta == 1.
struct RadialCutoff {
  double radius = std::numeric_limits<double>::infinity();

  double operator()(double r) const { return std::isinf(radius) ? 1.0 : eta_profile(r / radius); }
  double derivative(double r) const { return std::isinf(radius) ? 0.0 : eta_profile_derivative(r / radius) / radius; }
  double support() const { return 2.0 * radius; }
};

}  // namespace blowup
