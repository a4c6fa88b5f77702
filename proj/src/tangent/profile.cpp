#include "blowup/tangent/profile.hpp"

#include <cmath>
#include <limits>

#include "blowup/error.hpp"
#include "blowup/solver/radial_source.hpp"

namespace blowup::tangent {

namespace {

// w on the y line for blowup time T, and sup |w - kappa| over it.
double profile_line(const solver::RadialSlice& u, const Point& a, const Point& dir, const std::vector<double>& y,
                    double T, double t, double beta, double kappa, std::vector<double>* w) {
  const double tau = T - t;
  if (!(tau > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double amp = std::pow(tau, beta);
  const double len = std::sqrt(tau);
  double dev = 0.0;
  for (double yk : y) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double x = a[i] + yk * len * dir[i];
      r2 += x * x;
    }
    const double v = amp * u.value(std::sqrt(r2));
    dev = std::max(dev, std::abs(v - kappa));
    if (w) w->push_back(v);
  }
  return dev;
}

}  // namespace

SelfSimilarProfile self_similar_profile(const solver::Trajectory& traj, const Point& a,
                                        const std::vector<double>& times, const ProfileOptions& options) {
  const Dimension& dim = traj.grid->dim();
  if (static_cast<int>(a.size()) != dim.n) throw DomainError("base point has the wrong dimension");
  if (options.y_points < 2 || !(options.Y > 0.0)) throw DomainError("profile needs Y > 0 and two y points");
  SelfSimilarProfile out;
  out.a = a;
  if (options.blowup_time) {
    out.T = *options.blowup_time;
  } else if (traj.t_est) {
    out.T = traj.t_est->T;
  } else {
    throw DomainError("profile needs a blowup time");
  }
  out.uncertainty = options.uncertainty.value_or(traj.t_est ? traj.t_est->uncertainty : 0.0);
  out.kappa = dim.kappa;
  out.Y = options.Y;
  for (int k = 0; k < options.y_points; ++k) out.y.push_back(-options.Y + 2.0 * options.Y * k / (options.y_points - 1));

  Point dir(dim.n, 0.0);
  const double na = norm(a);
  if (na > 0.0) {
    for (int i = 0; i < dim.n; ++i) dir[i] = a[i] / na;
  } else {
    dir[0] = 1.0;
  }
  const double beta = dim.type1_exponent();
  const solver::TrajectorySource source(traj);
  for (double t : times) {
    if (!(t < out.T)) throw DomainError("profile times must lie before the blowup time");
    const solver::RadialSlice u = source.slice(t);
    ProfileSample s;
    s.t = t;
    s.tau = out.T - t;
    s.sup_deviation = profile_line(u, a, dir, out.y, out.T, t, beta, out.kappa, &s.w);
    s.deviation_low = profile_line(u, a, dir, out.y, out.T - out.uncertainty, t, beta, out.kappa, nullptr);
    s.deviation_high = profile_line(u, a, dir, out.y, out.T + out.uncertainty, t, beta, out.kappa, nullptr);
    out.samples.push_back(std::move(s));
  }
  return out;
}

std::vector<double> log_spaced_times(const solver::Trajectory& traj, double T, double t_first, int count) {
  const double hi = T - t_first;
  const double lo = T - traj.end_time();
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("log-spaced times need t_first < end time < T");
  if (count < 2) throw DomainError("need at least two times");
  std::vector<double> out;
  for (int k = 0; k < count; ++k) {
    const double tau = hi * std::pow(lo / hi, static_cast<double>(k) / (count - 1));
    out.push_back(k == count - 1 ? traj.end_time() : T - tau);
  }
  return out;
}

LiouvilleDistance liouville_distance(const SelfSimilarProfile& profile) {
  LiouvilleDistance d;
  if (profile.samples.empty()) return d;
  const auto& w = profile.samples.back().w;
  double plus = 0.0, minus = 0.0;
  for (double v : w) {
    d.d_zero = std::max(d.d_zero, std::abs(v));
    plus = std::max(plus, std::abs(v - profile.kappa));
    minus = std::max(minus, std::abs(v + profile.kappa));
  }
  d.d_kappa = std::min(plus, minus);
  return d;
}

}  // namespace blowup::tangent
