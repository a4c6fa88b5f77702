#include "blowup/kernel/bubble.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "blowup/error.hpp"
#include "blowup/kernel/spectral.hpp"
#include "blowup/numerics/quadrature.hpp"

namespace blowup::kernel {

namespace {

double profile_constant(const Dimension& dim) { return 1.0 / (dim.n * (dim.n - 2.0)); }

void check_lambda(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("bubble scale lambda must be positive");
}

}  // namespace

double UnitBubble::value(double r, const Dimension& dim) {
  return std::pow(1.0 + profile_constant(dim) * r * r, -dim.alpha);
}

double UnitBubble::dr(double r, const Dimension& dim) {
  const double c = profile_constant(dim);
  return -2.0 * dim.alpha * c * r * std::pow(1.0 + c * r * r, -dim.alpha - 1.0);
}

double UnitBubble::drr(double r, const Dimension& dim) {
  const double c = profile_constant(dim);
  const double q = 1.0 + c * r * r;
  return -2.0 * dim.alpha * c * std::pow(q, -dim.alpha - 1.0) +
         4.0 * dim.alpha * (dim.alpha + 1.0) * c * c * r * r * std::pow(q, -dim.alpha - 2.0);
}

double UnitBubble::dilation_mode(double r, const Dimension& dim) {
  const double c = profile_constant(dim);
  const double q = 1.0 + c * r * r;
  return dim.alpha * std::pow(q, -dim.alpha - 1.0) * (1.0 - c * r * r);
}

double bubble_value(std::span<const double> x, const BubbleParams& params, const Dimension& dim) {
  check_lambda(params.lambda);
  const double lam = params.lambda;
  const double d2 = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - params.xi[i]) * (x[i] - params.xi[i]);
    return s;
  }();
  return std::pow(lam / (lam * lam + d2 * profile_constant(dim)), dim.alpha);
}

std::vector<double> bubble_gradient(std::span<const double> x, const BubbleParams& params, const Dimension& dim) {
  check_lambda(params.lambda);
  const double lam = params.lambda;
  const double c = profile_constant(dim);
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - params.xi[i]) * (x[i] - params.xi[i]);
  const double denom = lam * lam + c * d2;
  // d/dx_i (lam/denom)^alpha = -alpha (lam/denom)^alpha * 2c (x_i - xi_i) / denom
  const double scale = -2.0 * dim.alpha * c * std::pow(lam / denom, dim.alpha) / denom;
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = scale * (x[i] - params.xi[i]);
  return g;
}

double bubble_laplacian(std::span<const double> x, const BubbleParams& params, const Dimension& dim) {
  check_lambda(params.lambda);
  const double lam = params.lambda;
  const double r = distance(x, params.xi) / lam;
  // W_{xi,lam}(x) = lam^{-alpha} W(r), so Delta = lam^{-alpha-2} (W'' + (n-1)/r W').
  // The combination is written without the 1/r to stay finite at r = 0.
  const double c = profile_constant(dim);
  const double q = 1.0 + c * r * r;
  const double radial_part = -2.0 * dim.alpha * c * dim.n * std::pow(q, -dim.alpha - 1.0) +
                             4.0 * dim.alpha * (dim.alpha + 1.0) * c * c * r * r * std::pow(q, -dim.alpha - 2.0);
  return std::pow(lam, -dim.alpha - 2.0) * radial_part;
}

double kernel_Z(int i, std::span<const double> y, const Dimension& dim) {
  if (i < 1 || i > dim.n + 1) throw RangeError("kernel index must be in 1..n+1");
  const double c = profile_constant(dim);
  double r2 = 0.0;
  for (double v : y) r2 += v * v;
  const double q = 1.0 + c * r2;
  if (i <= dim.n) return -2.0 * dim.alpha * c * std::pow(q, -dim.alpha - 1.0) * y[i - 1];
  return dim.alpha * std::pow(q, -dim.alpha - 1.0) * (1.0 - c * r2);
}

double scaled_kernel(int i, std::span<const double> x, const BubbleParams& params, const Dimension& dim,
                     const SpectralData* spectral) {
  check_lambda(params.lambda);
  const double lam = params.lambda;
  std::vector<double> y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = (x[k] - params.xi[k]) / lam;
  const double scale = std::pow(lam, -dim.n / 2.0);
  if (i == 0) {
    if (spectral == nullptr) throw DomainError("negative-mode kernel Z_0 needs spectral data");
    return scale * spectral->z0(norm(y));
  }
  return scale * kernel_Z(i, y, dim);
}

double bubble_energy(const Dimension& dim) {
  static std::mutex mutex;
  static std::map<int, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(dim.n); it != cache.end()) return it->second;
  }
  const auto integrand = [&](double r) {
    const double w = UnitBubble::dr(r, dim);
    return w * w * std::pow(r, dim.n - 1);
  };
  const double scale = std::sqrt(dim.n * (dim.n - 2.0));
  const auto result = numerics::integrate_to_infinity(integrand, 0.0, scale);
  if (result.error > 1e-10 * std::abs(result.value))
    throw NumericalError("bubble energy quadrature did not converge", result.error);
  const double lambda = dim.sphere_area() * result.value;
  std::lock_guard lock(mutex);
  cache.emplace(dim.n, lambda);
  return lambda;
}

double bubble_potential_energy(const Dimension& dim) {
  const auto integrand = [&](double r) { return std::pow(UnitBubble::value(r, dim), dim.p + 1.0) * std::pow(r, dim.n - 1); };
  const double scale = std::sqrt(dim.n * (dim.n - 2.0));
  const auto result = numerics::integrate_to_infinity(integrand, 0.0, scale);
  if (result.error > 1e-10 * std::abs(result.value))
    throw NumericalError("bubble potential-energy quadrature did not converge", result.error);
  return dim.sphere_area() * result.value;
}

double type2_density(const Dimension& dim, int bubbles) {
  return bubbles * bubble_energy(dim) * std::pow(4.0 * std::numbers::pi, -dim.n / 2.0) / dim.n;
}

}  // namespace blowup::kernel
