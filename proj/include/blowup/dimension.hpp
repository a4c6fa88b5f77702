#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "blowup/error.hpp"

namespace blowup {

using Point = std::vector<double>;

/// Spatial dimension n and the exponents derived from it for the
/// energy-critical problem.
struct Dimension {
  int n = 7;
  double p = 9.0 / 5.0;                 // (n+2)/(n-2)
  double alpha = 2.5;                   // (n-2)/2
  double kappa = std::pow(1.25, 1.25);  // (p-1)^{-1/(p-1)}

  /// Throws DomainError for n < 3.
  static Dimension of(int n) {
    if (n < 3) throw DomainError("dimension n must be >= 3, got " + std::to_string(n));
    Dimension d;
    d.n = n;
    d.p = (n + 2.0) / (n - 2.0);
    d.alpha = (n - 2.0) / 2.0;
    d.kappa = std::pow(d.p - 1.0, -1.0 / (d.p - 1.0));
    return d;
  }

  /// The blowup results this library checks against are stated for n >= 7.
  bool classified_regime() const { return n >= 7; }

  /// Type I rate exponent 1/(p-1) = (n-2)/4.
  double type1_exponent() const { return 1.0 / (p - 1.0); }

  /// |S^{n-1}|, area of the unit sphere.
  double sphere_area() const {
    return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
  }

  /// |B_1| = |S^{n-1}| / n.
  double ball_volume() const { return sphere_area() / n; }

  /// Blowup density of a Type I point: n^{-1} ((n-2)/4)^{n/2}.
  double type1_density() const { return std::pow((n - 2.0) / 4.0, n / 2.0) / n; }
};

inline double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double distance(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

}  // namespace blowup
