#include "blowup/kernel/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "blowup/error.hpp"
#include "blowup/kernel/bubble.hpp"
#include "blowup/numerics/dopri5.hpp"
#include "blowup/numerics/quadrature.hpp"
#include "blowup/numerics/radial_stencil.hpp"

namespace blowup::kernel {

namespace {

double potential(double r, const Dimension& dim) {
  return dim.p * std::pow(UnitBubble::value(r, dim), dim.p - 1.0);
}

// Series start Z = 1 + (mu - V(0)) r^2 / (2n) near the origin.
constexpr double kStartRadius = 1e-4;

struct ShootingSystem {
  const Dimension& dim;
  double mu;
  void operator()(double r, const std::vector<double>& y, std::vector<double>& dy) const {
    dy.resize(2);
    dy[0] = y[1];
    dy[1] = -(dim.n - 1.0) / r * y[1] + (mu - potential(r, dim)) * y[0];
  }
};

std::vector<double> series_start(const Dimension& dim, double mu) {
  const double c = (mu - potential(0.0, dim)) / dim.n;
  return {1.0 + 0.5 * c * kStartRadius * kStartRadius, c * kStartRadius};
}

// +1 if Z stays positive out to r_max, -1 if it crosses zero.
int shooting_sign(const Dimension& dim, double mu, double r_max) {
  ShootingSystem sys{dim, mu};
  std::vector<double> y = series_start(dim, mu);
  int sign = +1;
  numerics::dopri5_integrate(sys, kStartRadius, r_max, y, 1e-12, 1e-300, 1e-4, [&](double, const std::vector<double>& s) {
    if (s[0] < 0.0) {
      sign = -1;
      return false;
    }
    // Growing and far above the origin value: the decaying branch has been lost upward.
    if (s[0] > 1e6 && s[1] > 0.0) return false;
    return true;
  });
  return sign;
}

double table_integral_of_square(const Dimension& dim, const numerics::CubicSpline& spline,
                                std::span<const double> radii, double mu0) {
  const auto& rule = numerics::cached_gauss_legendre(8);
  const double body = numerics::composite_gauss(
      [&](double r) {
        const double z = spline(r);
        return z * z * std::pow(r, dim.n - 1);
      },
      radii, rule);
  const double rc = radii.back();
  const double zc = spline(rc);
  const double k = std::sqrt(mu0);
  const auto tail = numerics::integrate_to_infinity(
      [&](double r) {
        const double z = zc * std::pow(rc / r, 0.5 * (dim.n - 1)) * std::exp(-k * (r - rc));
        return z * z * std::pow(r, dim.n - 1);
      },
      rc, 1.0 / k);
  return dim.sphere_area() * (body + tail.value);
}

}  // namespace

SpectralData::SpectralData(int n, double mu0, std::vector<double> radii, std::vector<double> values)
    : n_(n), mu0_(mu0), radii_(std::move(radii)), values_(std::move(values)) {
  if (radii_.size() < 4 || radii_.size() != values_.size()) throw DomainError("spectral table too short or ragged");
  if (radii_.front() != 0.0) throw DomainError("spectral table must start at r = 0");
  if (!(mu0_ > 0.0)) throw DomainError("mu0 must be positive");
  const Dimension dim = Dimension::of(n_);
  const double rc = radii_.back();
  const double tail_slope = values_.back() * (-std::sqrt(mu0_) - 0.5 * (n_ - 1) / rc);
  spline_ = numerics::CubicSpline(radii_, values_, 0.0, tail_slope);
  l2_norm_ = table_integral_of_square(dim, spline_, radii_, mu0_);
}

double SpectralData::z0(double r) const {
  const double rc = radii_.back();
  if (r <= rc) return spline_(r);
  return values_.back() * std::pow(rc / r, 0.5 * (n_ - 1)) * std::exp(-std::sqrt(mu0_) * (r - rc));
}

double SpectralData::z0_derivative(double r) const {
  const double rc = radii_.back();
  if (r <= rc) return spline_.derivative(r);
  return z0(r) * (-std::sqrt(mu0_) - 0.5 * (n_ - 1) / r);
}

nlohmann::json SpectralData::to_json() const {
  return {{"n", n_}, {"mu0", mu0_}, {"l2_norm", l2_norm_}, {"radii", radii_}, {"values", values_}};
}

SpectralData SpectralData::from_json(const nlohmann::json& j) {
  try {
    return SpectralData(j.at("n").get<int>(), j.at("mu0").get<double>(), j.at("radii").get<std::vector<double>>(),
                        j.at("values").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed spectral table: ") + e.what());
  }
}

double shoot_negative_eigenvalue(const Dimension& dim, double r_max, double tol) {
  double lo = 1e-8;
  double hi = potential(0.0, dim);
  if (shooting_sign(dim, lo, r_max) != -1 || shooting_sign(dim, hi, r_max) != +1)
    throw BracketError("shooting functional has no sign change on (0, pW(0)^{p-1}]");
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (shooting_sign(dim, mid, r_max) > 0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

DiscreteSpectrum radial_operator_spectrum(const Dimension& dim, double r_max, int nodes, int keep) {
  const double h = r_max / nodes;
  std::vector<double> r(nodes + 1);
  for (int i = 0; i <= nodes; ++i) r[i] = i * h;
  const numerics::RadialStencil stencil(r, dim.n);
  // Unknowns 0..nodes-1, Dirichlet at r_max. Symmetrized with V^{-1/2}.
  std::vector<double> diag(nodes), off(nodes, 0.0);
  for (int i = 0; i < nodes; ++i) {
    double d = stencil.face[i];
    if (i > 0) d += stencil.face[i - 1];
    diag[i] = d / stencil.volume[i] - potential(r[i], dim);
    if (i + 1 < nodes) off[i] = -stencil.face[i] / std::sqrt(stencil.volume[i] * stencil.volume[i + 1]);
  }
  // Sturm count: number of eigenvalues below sigma = negative pivots of T - sigma I.
  const auto count_below = [&](double sigma) {
    int count = 0;
    double q = diag[0] - sigma;
    for (int i = 0;;) {
      if (q < 0.0) ++count;
      if (++i == nodes) break;
      if (q == 0.0) q = 1e-300;
      q = diag[i] - sigma - off[i - 1] * off[i - 1] / q;
    }
    return count;
  };
  double lower = 0.0;
  double upper = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double radius = std::abs(off[i]) + (i > 0 ? std::abs(off[i - 1]) : 0.0);
    lower = std::min(lower, diag[i] - radius);
    upper = std::max(upper, diag[i] + radius);
  }
  DiscreteSpectrum out;
  out.negative_count = count_below(0.0);
  for (int k = 0; k < std::min(keep, nodes); ++k) {
    double lo = lower;
    double hi = upper;
    while (hi - lo > 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi)) && hi - lo > 1e-300) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (count_below(mid) > k)
        hi = mid;
      else
        lo = mid;
    }
    out.lowest.push_back(0.5 * (lo + hi));
  }
  return out;
}

double matrix_negative_eigenvalue(const Dimension& dim, double r_max, int nodes) {
  const double coarse = -radial_operator_spectrum(dim, r_max, nodes, 1).lowest.at(0);
  const double fine = -radial_operator_spectrum(dim, r_max, 2 * nodes, 1).lowest.at(0);
  return (4.0 * fine - coarse) / 3.0;
}

std::vector<double> radial_operator_apply(const Dimension& dim, std::span<const double> nodes,
                                          std::span<const double> values) {
  const numerics::RadialStencil stencil(nodes, dim.n);
  std::vector<double> out(nodes.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    out[i] = -stencil.laplacian(values, i) - potential(nodes[i], dim) * values[i];
  return out;
}

SpectralData ground_state(const Dimension& dim, const GroundStateOptions& options) {
  const double mu0 = shoot_negative_eigenvalue(dim, options.r_max, options.tol);
  const double mu_matrix = matrix_negative_eigenvalue(dim, options.r_max, options.matrix_nodes);
  if (std::abs(mu_matrix - mu0) > options.consistency_tol * mu0)
    throw ConsistencyError("shooting mu0 = " + std::to_string(mu0) + " disagrees with matrix mu0 = " +
                           std::to_string(mu_matrix));

  // Locate where the decaying branch is still trustworthy.
  ShootingSystem sys{dim, mu0};
  std::vector<double> y = series_start(dim, mu0);
  double cut = options.r_max;
  numerics::dopri5_integrate(sys, kStartRadius, options.r_max, y, 1e-12, 1e-300, 1e-4,
                             [&](double r, const std::vector<double>& s) {
                               if (s[0] < options.tail_threshold || s[1] >= 0.0) {
                                 cut = r;
                                 return false;
                               }
                               return true;
                             });

  // Log-spaced table on [kStartRadius, cut] plus the origin.
  const int m = options.table_size;
  std::vector<double> radii{0.0};
  std::vector<double> values{1.0};
  const double l0 = std::log(kStartRadius);
  const double l1 = std::log(cut);
  y = series_start(dim, mu0);
  double r_prev = kStartRadius;
  radii.push_back(kStartRadius);
  values.push_back(y[0]);
  for (int k = 1; k < m; ++k) {
    const double r_next = std::exp(l0 + (l1 - l0) * k / (m - 1));
    numerics::dopri5_integrate(sys, r_prev, r_next, y, 1e-12, 1e-300, (r_next - r_prev) * 0.5,
                               [](double, const std::vector<double>&) { return true; });
    radii.push_back(r_next);
    values.push_back(y[0]);
    r_prev = r_next;
  }

  const SpectralData raw(dim.n, mu0, radii, values);
  const double scale = 1.0 / std::sqrt(raw.l2_norm());
  for (double& v : values) v *= scale;
  return SpectralData(dim.n, mu0, std::move(radii), std::move(values));
}

const SpectralData& cached_ground_state(const Dimension& dim) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<SpectralData>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[dim.n];
  if (!slot) slot = std::make_unique<SpectralData>(ground_state(dim));
  return *slot;
}

}  // namespace blowup::kernel
