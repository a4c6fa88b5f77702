#pragma once

#include <functional>
#include <span>
#include <vector>

namespace blowup::numerics {

/// Nodes and weights of a one-dimensional rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with m points (Golub-Welsch).
GaussRule gauss_legendre(int m);

/// Gauss rule for the weight (1 - t^2)^gamma on [-1, 1], gamma > -1.
GaussRule gauss_gegenbauer(int m, double gamma);

/// Cached Gauss-Legendre rule; safe to call concurrently.
const GaussRule& cached_gauss_legendre(int m);

/// Integrates f over [a, b] with the rule applied on each panel between
/// consecutive breakpoints (breakpoints must be increasing).
double composite_gauss(const std::function<double(double)>& f, std::span<const double> breakpoints,
                       const GaussRule& rule);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (15-point) on a finite interval.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = 1e-13, int max_depth = 30);

/// Integral over [a, inf) by dyadic panels [a + L 2^k, a + L 2^{k+1}],
/// truncated once a panel contributes less than `truncation` of the running
/// total. Throws NumericalError if the tail does not settle.
QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                       double length_scale, double truncation = 1e-14,
                                       double rel_tol = 1e-13);

/// Product Gauss rule on the unit sphere S^{n-1} in hyperspherical
/// coordinates: q Gauss-Gegenbauer points per polar angle and 2q equally
/// spaced azimuths, exact for spherical polynomials of degree <= 2q - 1.
/// Weights sum to |S^{n-1}|.
struct SphereRule {
  int n = 0;
  std::vector<double> directions;  // row-major, size() / n directions
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> direction(std::size_t k) const {
    return {directions.data() + k * n, static_cast<std::size_t>(n)};
  }
};

SphereRule sphere_rule(int n, int q, double azimuth_phase = 0.0);

}  // namespace blowup::numerics
