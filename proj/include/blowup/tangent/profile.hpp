#pragma once

#include <optional>
#include <vector>

#include "blowup/solver/trajectory.hpp"

namespace blowup::tangent {

struct ProfileOptions {
  double Y = 5.0;
  int y_points = 101;  // on [-Y, Y]
  /// Defaults to the trajectory's estimate and its uncertainty.
  std::optional<double> blowup_time;
  std::optional<double> uncertainty;
};

struct ProfileSample {
  double t = 0.0;
  double tau = 0.0;  // T - t
  std::vector<double> w;
  double sup_deviation = 0.0;  // sup over |y| <= Y of |w - kappa|
  /// The same deviation with T moved to T - uncertainty and T + uncertainty
  /// (NaN where the shifted T does not exceed t).
  double deviation_low = 0.0;
  double deviation_high = 0.0;
};

/// w(y, t) = (T - t)^{1/(p-1)} u(a + y sqrt(T - t), t), with y running over
/// a line through a in the radial direction of a (e_1 when a = 0). For a
/// radial u this line meets every radius the ball |y| <= Y reaches.
struct SelfSimilarProfile {
  Point a;
  double T = 0.0;
  double uncertainty = 0.0;
  double kappa = 0.0;
  double Y = 5.0;
  std::vector<double> y;
  std::vector<ProfileSample> samples;
};

/// Throws DomainError when a time is not below T, RangeError outside the
/// trajectory.
SelfSimilarProfile self_similar_profile(const solver::Trajectory& traj, const Point& a,
                                        const std::vector<double>& times, const ProfileOptions& options = {});

/// `count` times with T - t log-spaced from T - t_first down to T - t_end.
std::vector<double> log_spaced_times(const solver::Trajectory& traj, double T, double t_first, int count);

struct LiouvilleDistance {
  double d_zero = 0.0;   // sup |w|
  double d_kappa = 0.0;  // min over the sign of sup |w -+ kappa|
};

/// Distances of the latest sample to the two self-similar alternatives.
LiouvilleDistance liouville_distance(const SelfSimilarProfile& profile);

}  // namespace blowup::tangent
