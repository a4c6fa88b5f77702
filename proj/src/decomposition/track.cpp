#include "blowup/decomposition/track.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blowup/error.hpp"

namespace blowup::decomposition {

std::size_t ParameterTrack::valid_count() const {
  return std::count_if(points.begin(), points.end(), [](const TrackPoint& p) { return p.valid; });
}

double ParameterTrack::max_ratio() const {
  double m = 0.0;
  for (const auto& p : points)
    if (std::isfinite(p.ratio)) m = std::max(m, p.ratio);
  return m;
}

double ParameterTrack::max_a_over_lambda() const {
  double m = 0.0;
  for (const auto& p : points)
    if (p.valid) m = std::max(m, std::abs(p.a() / p.lambda()));
  return m;
}

double centered_derivative(const std::vector<double>& t, const std::vector<double>& v, std::size_t k) {
  const std::size_t m = t.size();
  if (m < 2 || v.size() != m || k >= m) throw DomainError("derivative needs at least two samples");
  if (k == 0) return (v[1] - v[0]) / (t[1] - t[0]);
  if (k == m - 1) return (v[m - 1] - v[m - 2]) / (t[m - 1] - t[m - 2]);
  const double h1 = t[k] - t[k - 1];
  const double h2 = t[k + 1] - t[k];
  return -h2 / (h1 * (h1 + h2)) * v[k - 1] + (h2 - h1) / (h1 * h2) * v[k] + h1 / (h2 * (h1 + h2)) * v[k + 1];
}

namespace {

double calibrate(const std::vector<double>& ratios, double fraction, double margin) {
  if (ratios.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t count = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * ratios.size())));
  double m = 0.0;
  for (std::size_t i = 0; i < count && i < ratios.size(); ++i) m = std::max(m, ratios[i]);
  return margin * m;
}

}  // namespace

ParameterTrack track_parameters(const solver::Trajectory& traj, const kernel::SpectralData& spectral,
                                const TrackOptions& options) {
  if (traj.snapshots.empty()) throw DomainError("trajectory has no snapshots");
  const Dimension& dim = traj.grid->dim();
  ParameterTrack track;
  track.blowup_time = options.blowup_time;
  if (!track.blowup_time && traj.t_est) track.blowup_time = traj.t_est->T;

  std::optional<kernel::BubbleParams> previous;
  for (const auto& snap : traj.snapshots) {
    if (options.t_begin && snap.time < *options.t_begin) continue;
    if (options.t_end && snap.time > *options.t_end) continue;
    TrackPoint point;
    point.t = snap.time;
    const RadialFieldSampler sampler(snap);
    double lambda0 = 0.0;
    double a0 = 0.0;
    if (options.warm_start && previous) {
      lambda0 = previous->lambda;
      a0 = previous->a;
    } else {
      const double peak = *std::max_element(snap.values.begin(), snap.values.end());
      if (!(peak > 0.0)) {
        point.fit.failure = "no positive maximum";
        track.points.push_back(point);
        previous.reset();
        continue;
      }
      lambda0 = std::pow(peak, -1.0 / dim.alpha);
    }
    point.fit = fit_orthogonal_radial(sampler, lambda0, a0, spectral, options.fit);
    point.valid = point.fit.converged;
    if (point.valid)
      previous = point.fit.params;
    else
      previous.reset();
    track.points.push_back(std::move(point));
  }

  // Derivatives along runs of consecutive valid fits.
  const double exponent = (dim.n - 4.0) / 2.0;
  for (std::size_t k = 0; k < track.points.size();) {
    if (!track.points[k].valid) {
      ++k;
      continue;
    }
    std::size_t end = k;
    while (end < track.points.size() && track.points[end].valid) ++end;
    if (end - k >= 2) {
      std::vector<double> t, lam, a;
      for (std::size_t i = k; i < end; ++i) {
        t.push_back(track.points[i].t);
        lam.push_back(track.points[i].lambda());
        a.push_back(track.points[i].a());
      }
      for (std::size_t i = k; i < end; ++i) {
        auto& p = track.points[i];
        p.dlambda_dt = centered_derivative(t, lam, i - k);
        p.da_dt = centered_derivative(t, a, i - k);
        p.ratio = std::abs(p.dlambda_dt) / std::pow(p.lambda(), exponent);
        if (track.blowup_time && *track.blowup_time > p.t)
          p.ratio_normalized = p.ratio / std::pow(*track.blowup_time - p.t, (dim.n - 10.0) / 4.0);
      }
    }
    k = end;
  }

  std::vector<double> ratios, normalized, xs, ys;
  for (const auto& p : track.points) {
    if (std::isfinite(p.ratio)) {
      ratios.push_back(p.ratio);
      if (p.ratio > 0.0) {
        xs.push_back(std::log(p.lambda()));
        ys.push_back(std::log(p.ratio));
      }
    }
    if (std::isfinite(p.ratio_normalized)) normalized.push_back(p.ratio_normalized);
  }
  track.c_red = calibrate(ratios, options.calibration_fraction, options.margin);
  track.c_red_normalized = calibrate(normalized, options.calibration_fraction, options.margin);
  if (xs.size() >= 3) {
    const double m = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double den = m * sxx - sx * sx;
    if (den > 0.0) track.log_slope = (m * sxy - sx * sy) / den;
  }

  for (std::size_t i = 0; i < track.points.size(); ++i) {
    auto& p = track.points[i];
    std::ostringstream os;
    os.precision(6);
    if (!p.valid) {
      os << "t=" << p.t << " fit failed: " << p.fit.failure;
      track.violation_log.push_back(os.str());
      continue;
    }
    if (std::isfinite(p.ratio) && p.ratio > track.c_red) {
      p.violates = true;
      os << "t=" << p.t << " |lambda'|/lambda^((n-4)/2)=" << p.ratio << " > C_red=" << track.c_red;
      track.violation_log.push_back(os.str());
      os.str("");
    }
    if (std::isfinite(p.ratio_normalized) && p.ratio_normalized > track.c_red_normalized) {
      p.violates_normalized = true;
      os << "t=" << p.t << " normalized ratio " << p.ratio_normalized << " > C_red=" << track.c_red_normalized;
      track.violation_log.push_back(os.str());
    }
  }
  return track;
}

}  // namespace blowup::decomposition
