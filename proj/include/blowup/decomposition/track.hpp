#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blowup/decomposition/fit.hpp"
#include "blowup/solver/trajectory.hpp"

namespace blowup::decomposition {

struct TrackOptions {
  FitOptions fit;
  bool warm_start = true;
  /// Blowup time for the normalized bound; defaults to the trajectory's estimate.
  std::optional<double> blowup_time;
  /// Snapshots with t outside [t_begin, t_end] are skipped.
  std::optional<double> t_begin;
  std::optional<double> t_end;
  /// C_red is the largest ratio over this leading fraction of the valid
  /// points, times `margin`.
  double calibration_fraction = 0.5;
  double margin = 2.0;
};

struct TrackPoint {
  double t = 0.0;
  DecompositionResult fit;
  bool valid = false;
  double dlambda_dt = std::numeric_limits<double>::quiet_NaN();
  double da_dt = std::numeric_limits<double>::quiet_NaN();
  /// |lambda'| / lambda^{(n-4)/2}
  double ratio = std::numeric_limits<double>::quiet_NaN();
  /// |lambda'| / ((T - t)^{(n-10)/4} lambda^{(n-4)/2}); NaN without T.
  double ratio_normalized = std::numeric_limits<double>::quiet_NaN();
  bool violates = false;
  bool violates_normalized = false;

  double lambda() const { return fit.params.lambda; }
  double a() const { return fit.params.a; }
};

struct ParameterTrack {
  std::vector<TrackPoint> points;
  std::optional<double> blowup_time;
  double c_red = std::numeric_limits<double>::quiet_NaN();
  double c_red_normalized = std::numeric_limits<double>::quiet_NaN();
  /// Least-squares slope of log ratio against log lambda over valid points;
  /// clearly negative values mean the ratio grows as lambda shrinks.
  double log_slope = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> violation_log;

  std::size_t valid_count() const;
  double max_ratio() const;
  double max_a_over_lambda() const;
};

/// Radial fits of every snapshot, warm-started from the previous success, with
/// centered differences of lambda and a and the bound checks on lambda'.
ParameterTrack track_parameters(const solver::Trajectory& traj, const kernel::SpectralData& spectral,
                                const TrackOptions& options = {});

/// d/dt at index k from the values at t[k-1], t[k], t[k+1] (non-uniform
/// spacing), falling back to one-sided differences at the ends.
double centered_derivative(const std::vector<double>& t, const std::vector<double>& v, std::size_t k);

}  // namespace blowup::decomposition
