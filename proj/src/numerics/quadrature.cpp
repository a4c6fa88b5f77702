#include "blowup/numerics/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "blowup/error.hpp"

namespace blowup::numerics {

namespace {

// Golub-Welsch for a symmetric weight on [-1, 1] with monic recurrence
// p_{k+1} = t p_k - beta_k p_{k-1}.
GaussRule golub_welsch(int m, const std::function<double(int)>& beta, double mass) {
  if (m < 1) throw DomainError("Gauss rule needs at least one node");
  GaussRule rule;
  if (m == 1) {
    rule.nodes = {0.0};
    rule.weights = {mass};
    return rule;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd off(m - 1);
  for (int k = 1; k < m; ++k) off(k - 1) = std::sqrt(beta(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mass * v0 * v0;
  }
  return rule;
}

}  // namespace

GaussRule gauss_legendre(int m) {
  return golub_welsch(
      m, [](int k) { return static_cast<double>(k) * k / (4.0 * k * k - 1.0); }, 2.0);
}

GaussRule gauss_gegenbauer(int m, double gamma) {
  if (gamma <= -1.0) throw DomainError("Gegenbauer weight exponent must exceed -1");
  const double mass = std::sqrt(std::numbers::pi) * std::tgamma(gamma + 1.0) / std::tgamma(gamma + 1.5);
  return golub_welsch(
      m,
      [gamma](int k) {
        const double s = k + gamma;
        return k * (k + 2.0 * gamma) / (4.0 * s * s - 1.0);
      },
      mass);
}

const GaussRule& cached_gauss_legendre(int m) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, gauss_legendre(m)).first;
  return it->second;
}

double composite_gauss(const std::function<double(double)>& f, std::span<const double> breakpoints,
                       const GaussRule& rule) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const double a = breakpoints[k];
    const double b = breakpoints[k + 1];
    if (!(b > a)) continue;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double panel = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) panel += rule.weights[i] * f(mid + half * rule.nodes[i]);
    total += half * panel;
  }
  return total;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, int max_depth) {
  QuadratureResult out;
  if (a == b) return out;
  double l1 = 0.0;
  out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, static_cast<unsigned>(max_depth), rel_tol, &out.error, &l1);
  return out;
}

QuadratureResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                       double length_scale, double truncation, double rel_tol) {
  QuadratureResult out;
  double lo = a;
  double width = length_scale;
  int quiet = 0;
  for (int k = 0; k < 200; ++k) {
    const double hi = lo + width;
    const QuadratureResult panel = integrate_adaptive(f, lo, hi, rel_tol);
    out.value += panel.value;
    out.error += panel.error;
    // Two consecutive negligible panels before stopping; one can vanish by a sign change.
    if (std::abs(panel.value) < truncation * std::abs(out.value)) {
      if (++quiet == 2) return out;
    } else {
      quiet = 0;
    }
    lo = hi;
    width *= 2.0;
  }
  throw NumericalError("integral over [a, inf) did not settle", out.error);
}

SphereRule sphere_rule(int n, int q, double azimuth_phase) {
  if (n < 2) throw DomainError("sphere rule needs n >= 2");
  SphereRule rule;
  rule.n = n;
  // S^1: equally spaced azimuths.
  const int m_phi = 2 * q;
  std::vector<std::vector<double>> dirs;
  std::vector<double> wts;
  for (int j = 0; j < m_phi; ++j) {
    const double phi = 2.0 * std::numbers::pi * (j + azimuth_phase) / m_phi;
    dirs.push_back({std::cos(phi), std::sin(phi)});
    wts.push_back(2.0 * std::numbers::pi / m_phi);
  }
  // Lift S^{d-1} -> S^d with omega = (t, sqrt(1 - t^2) omega'), weight (1 - t^2)^{(d-2)/2}.
  for (int d = 2; d < n; ++d) {
    const GaussRule polar = gauss_gegenbauer(q, (d - 2) / 2.0);
    std::vector<std::vector<double>> next_dirs;
    std::vector<double> next_wts;
    next_dirs.reserve(dirs.size() * q);
    for (int i = 0; i < q; ++i) {
      const double t = polar.nodes[i];
      const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
      for (std::size_t k = 0; k < dirs.size(); ++k) {
        std::vector<double> v;
        v.reserve(d + 1);
        v.push_back(t);
        for (double c : dirs[k]) v.push_back(s * c);
        next_dirs.push_back(std::move(v));
        next_wts.push_back(polar.weights[i] * wts[k]);
      }
    }
    dirs = std::move(next_dirs);
    wts = std::move(next_wts);
  }
  rule.weights = std::move(wts);
  rule.directions.reserve(dirs.size() * n);
  for (const auto& v : dirs) rule.directions.insert(rule.directions.end(), v.begin(), v.end());
  return rule;
}

}  // namespace blowup::numerics
