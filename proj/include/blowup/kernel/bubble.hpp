#pragma once

#include <span>
#include <vector>

#include "blowup/dimension.hpp"

namespace blowup::kernel {

class SpectralData;

/// Center xi, scale lambda and negative-mode amplitude a of a bubble
/// W_{xi,lambda} + a Z_{0,xi,lambda}.
struct BubbleParams {
  Point xi;
  double lambda = 1.0;
  double a = 0.0;

  static BubbleParams centered(int n, double lambda, double a = 0.0) { return {Point(n, 0.0), lambda, a}; }
};

/// Radial profile of the unit bubble W(r) = (1 + r^2/(n(n-2)))^{-(n-2)/2}
/// and its first two radial derivatives.
struct UnitBubble {
  static double value(double r, const Dimension& dim);
  static double dr(double r, const Dimension& dim);
  static double drr(double r, const Dimension& dim);
  /// Z_{n+1}(r) = (n-2)/2 W + r W'.
  static double dilation_mode(double r, const Dimension& dim);
};

/// W_{xi,lambda}(x) = (lambda / (lambda^2 + |x-xi|^2/(n(n-2))))^{(n-2)/2}.
/// Throws DomainError if lambda <= 0.
double bubble_value(std::span<const double> x, const BubbleParams& params, const Dimension& dim);

/// Closed-form gradient of bubble_value.
std::vector<double> bubble_gradient(std::span<const double> x, const BubbleParams& params, const Dimension& dim);

/// Closed-form Laplacian of bubble_value.
double bubble_laplacian(std::span<const double> x, const BubbleParams& params, const Dimension& dim);

/// Zero modes of -Delta - p W^{p-1} around the unit bubble:
/// Z_i = dW/dy_i for 1 <= i <= n, Z_{n+1} = (n-2)/2 W + y.grad W.
/// Throws RangeError for i outside 1..n+1.
double kernel_Z(int i, std::span<const double> y, const Dimension& dim);

/// Z_{i,xi,lambda}(x) = lambda^{-n/2} Z_i((x - xi)/lambda) for 0 <= i <= n+1.
/// Index 0 is the negative mode and needs `spectral`.
double scaled_kernel(int i, std::span<const double> x, const BubbleParams& params, const Dimension& dim,
                     const SpectralData* spectral = nullptr);

/// Lambda = int |grad W|^2 over R^n, by adaptive radial quadrature. Cached per n.
double bubble_energy(const Dimension& dim);

/// int W^{p+1} over R^n, computed independently of bubble_energy.
double bubble_potential_energy(const Dimension& dim);

/// Type II density for N bubbles: n^{-1} (4 pi)^{-n/2} N Lambda.
double type2_density(const Dimension& dim, int bubbles);

}  // namespace blowup::kernel
