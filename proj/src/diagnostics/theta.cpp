#include "blowup/diagnostics/theta.hpp"

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "blowup/cutoff.hpp"
#include "blowup/error.hpp"
#include "blowup/kernel/bubble.hpp"
#include "blowup/numerics/quadrature.hpp"

namespace blowup::diagnostics {

namespace {

// e^{-z} I_nu(z) for z > 0.
double scaled_bessel_i(double nu, double z) {
  if (z < 500.0) return std::exp(-z) * boost::math::cyl_bessel_i(nu, z);
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 12; ++k) {
    term *= -(mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * z);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

constexpr double kGaussianHalfWidth = 14.0;  // in units of sqrt(s)

}  // namespace

double CutoffSpec::psi(double r) const { return std::isinf(radius) ? 1.0 : psi_profile(r / radius); }

double CutoffSpec::correction(double s) const { return c_mono * std::exp(-c_decay / s); }

std::string CutoffSpec::id() const {
  std::ostringstream os;
  os.precision(17);
  os << "psi(R=" << radius << ";C=" << c_mono << ";c=" << c_decay << ")";
  return os.str();
}

double spherical_heat_kernel(double r, double d, double s, const Dimension& dim) {
  const double n = dim.n;
  const double prefactor = std::pow(4.0 * std::numbers::pi * s, -0.5 * n);
  const double z = r * d / (2.0 * s);
  if (z == 0.0) return dim.sphere_area() * prefactor * std::exp(-(r * r + d * d) / (4.0 * s));
  const double nu = 0.5 * (n - 2.0);
  const double angular = std::pow(2.0 * std::numbers::pi, 0.5 * n) * std::pow(z, -nu) * scaled_bessel_i(nu, z);
  return prefactor * std::exp(-(r - d) * (r - d) / (4.0 * s)) * angular;
}

double theta_bare(const solver::RadialSource& source, const Point& x, double t, double s, const CutoffSpec& cutoff) {
  if (!(s > 0.0)) throw DomainError("theta needs s > 0");
  const Dimension& dim = source.dim();
  if (static_cast<int>(x.size()) != dim.n) throw DomainError("base point has the wrong dimension");
  const solver::RadialSlice u = source.slice(t - s);
  const double d = norm(x);
  const double width = std::sqrt(s);
  double lo = std::max(0.0, d - kGaussianHalfWidth * width);
  double hi = d + kGaussianHalfWidth * width;
  if (!std::isinf(cutoff.radius)) hi = std::min(hi, cutoff.radius);
  if (u.tail() == 0.0) hi = std::min(hi, u.data_radius());
  if (!(hi > lo)) return 0.0;

  std::vector<double> cuts{lo};
  for (double k : u.knots_between(lo, hi)) cuts.push_back(k);
  if (!std::isinf(cutoff.radius))
    for (double b : {0.75 * cutoff.radius, cutoff.radius})
      if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> panels{cuts.front()};
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double a = panels.back();
    const double b = cuts[i];
    if (!(b > a)) continue;
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / (0.5 * width))));
    for (int k = 1; k <= pieces; ++k) panels.push_back(a + (b - a) * k / pieces);
  }

  const double p = dim.p;
  const auto& rule = numerics::cached_gauss_legendre(8);
  double energy = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < panels.size(); ++i) {
    const double a = panels[i];
    const double b = panels[i + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double r = mid + half * rule.nodes[q];
      const double w = half * rule.weights[q] * spherical_heat_kernel(r, d, s, dim) * std::pow(r, dim.n - 1);
      if (w == 0.0) continue;
      const double ps = cutoff.psi(r);
      const double v = u.value(r);
      const double dv = u.derivative(r);
      energy += w * ps * ps * (0.5 * dv * dv - std::pow(std::abs(v), p + 1.0) / (p + 1.0));
      mass += w * ps * ps * v * v;
    }
  }
  const double beta = dim.type1_exponent();
  return std::pow(s, (p + 1.0) * beta) * energy + 0.5 * beta * std::pow(s, 2.0 * beta) * mass;
}

ThetaSample theta(const solver::RadialSource& source, const Point& x, double t, double s, const CutoffSpec& cutoff) {
  ThetaSample out;
  out.base_point = x;
  out.base_time = t;
  out.s = s;
  out.value = theta_bare(source, x, t, s, cutoff) + cutoff.correction(s);
  out.cutoff_id = cutoff.id();
  return out;
}

ThetaSample theta(const solver::Trajectory& traj, const Point& x, double t, double s, const CutoffSpec& cutoff) {
  return theta(solver::TrajectorySource(traj), x, t, s, cutoff);
}

MonotonicityReport theta_monotonicity_report(const solver::RadialSource& source, const Point& x, double t,
                                             const std::vector<double>& s_list, const CutoffSpec& cutoff,
                                             double tol) {
  if (s_list.size() < 3) throw DomainError("monotonicity report needs at least three s values");
  for (std::size_t k = 1; k < s_list.size(); ++k)
    if (!(s_list[k] > s_list[k - 1])) throw DomainError("s values must increase");
  MonotonicityReport report;
  for (double s : s_list) report.samples.push_back(theta(source, x, t, s, cutoff));
  for (std::size_t k = 0; k + 1 < report.samples.size(); ++k) {
    const auto& a = report.samples[k];
    const auto& b = report.samples[k + 1];
    if (b.value < a.value - tol) report.violations.push_back({a.s, b.s, a.value, b.value});
  }
  return report;
}

MonotonicityReport theta_monotonicity_report(const solver::Trajectory& traj, const Point& x, double t,
                                             const std::vector<double>& s_list, const CutoffSpec& cutoff,
                                             double tol) {
  return theta_monotonicity_report(solver::TrajectorySource(traj), x, t, s_list, cutoff, tol);
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::regular: return "Regular";
    case Verdict::type1: return "TypeI";
    case Verdict::type2: return "TypeII";
    case Verdict::indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

ClassificationResult classify(const solver::RadialSource& source, double blowup_time, const Point& x,
                              const CutoffSpec& cutoff, const ClassifyOptions& options) {
  if (!options.s_min || !(*options.s_min > 0.0)) throw DomainError("classify needs a positive s_min");
  if (options.points < 3) throw DomainError("classify needs at least three s values");
  const Dimension& dim = source.dim();
  const double s0 = *options.s_min;
  ClassificationResult result;

  std::vector<double> xs, ys;
  for (int k = 0; k < options.points; ++k) {
    const double s = s0 * std::pow(10.0, static_cast<double>(k) / (options.points - 1));
    ThetaSample sample;
    sample.base_point = x;
    sample.base_time = blowup_time;
    sample.s = s;
    sample.value = theta_bare(source, x, blowup_time, s, cutoff);
    sample.cutoff_id = cutoff.id();
    xs.push_back(std::log10(s / s0));
    ys.push_back(sample.value);
    result.samples.push_back(sample);
  }
  // Least-squares line in log10 s over the decade; the limit estimate is its value at s_min.
  const double m = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / m;
  double rms = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - intercept - slope * xs[i];
    rms += r * r;
    peak = std::max(peak, std::abs(ys[i]));
  }
  rms = std::sqrt(rms / m);
  result.theta_limit_est = intercept;
  result.confidence_band = std::abs(slope) + rms;

  const double d1 = dim.type1_density();
  const double d2 = kernel::type2_density(dim, 1);
  if (peak <= options.tolerance * d1) {
    result.verdict = Verdict::regular;
    result.note = "Theta below the regular threshold across the decade";
    return result;
  }
  const double mean = sy / m;
  result.slope_per_decade = slope / std::abs(mean);
  if (std::abs(result.slope_per_decade) > options.max_slope) {
    result.verdict = Verdict::indeterminate;
    result.note = "Theta still drifting in s";
    return result;
  }
  const double theta_lim = result.theta_limit_est;
  if (std::abs(theta_lim - d1) <= options.tolerance * d1) {
    result.verdict = Verdict::type1;
    return result;
  }
  const int bubbles = static_cast<int>(std::lround(theta_lim / d2));
  if (bubbles >= 1 && std::abs(theta_lim - bubbles * d2) <= options.tolerance * bubbles * d2) {
    result.verdict = Verdict::type2;
    result.bubbles = bubbles;
    return result;
  }
  result.verdict = Verdict::indeterminate;
  result.note = "Theta limit matches no density";
  return result;
}

ClassificationResult classify(const solver::Trajectory& traj, const Point& x, const CutoffSpec& cutoff,
                              const ClassifyOptions& options) {
  ClassifyOptions opts = options;
  if (!opts.blowup_time) {
    if (!traj.t_est) throw DomainError("classify needs a blowup time estimate");
    opts.blowup_time = traj.t_est->T;
  }
  if (!opts.s_min) {
    // Smallest s resolved in time (past the last snapshot) and space (near the origin).
    const double gap = *opts.blowup_time - traj.end_time();
    const double h = traj.mode == solver::Mode::full ? (*traj.grid)[1] : 0.0;
    opts.s_min = std::max(4.0 * std::max(gap, 0.0), 100.0 * h * h);
  }
  return classify(solver::TrajectorySource(traj), *opts.blowup_time, x, cutoff, opts);
}

bool epsilon_regularity_flag(const solver::Trajectory& traj, const Point& x, double t, double r, double eps_star,
                             const CutoffSpec& cutoff) {
  return theta(traj, x, t, r * r, cutoff).value <= eps_star;
}

double default_eps_star(const Dimension& dim) { return 0.1 * dim.type1_density(); }

}  // namespace blowup::diagnostics
