#pragma once

#include <functional>
#include <limits>

#include "blowup/dimension.hpp"
#include "blowup/solver/grid.hpp"
#include "blowup/solver/radial_source.hpp"

namespace blowup::diagnostics {

/// A radial function known through its value and radial derivative on [0, r_max].
struct RadialProfile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double r_max = std::numeric_limits<double>::infinity();

  static RadialProfile of(const solver::RadialField& field);
  static RadialProfile of(solver::RadialSlice slice);
  /// Closed-form W_{0,lambda}.
  static RadialProfile bubble(const Dimension& dim, double lambda = 1.0);
};

/// P_v(r) = int_{dB_r} [|grad v|^2/2 - (d_r v)^2 - (n-2)/(2r) v d_r v], which for
/// radial v is |dB_r| [-(d_r v)^2/2 - (n-2)/(2r) v d_r v].
/// Throws RangeError unless 0 < r <= r_max.
double pohozaev(const RadialProfile& v, double r, const Dimension& dim);

/// int_{dB_r} |v|^{p+1}/(p+1).
double pohozaev_boundary_term(const RadialProfile& v, double r, const Dimension& dim);

struct PohozaevBalance {
  double lhs = 0.0;  // P_u(r) - int_{dB_r} |u|^{p+1}/(p+1)
  double rhs = 0.0;  // -(1/r) int_{B_r} u_t [x . grad u + (n-2)/2 u]
  double residual() const { return std::abs(lhs - rhs); }
};

/// Both sides of the Pohozaev identity at (t, r), with u_t from the source's rate.
PohozaevBalance pohozaev_balance(const solver::RadialSource& source, double t, double r);

/// |lhs - rhs| of pohozaev_balance on a trajectory (stored scheme derivatives).
double pohozaev_identity_residual(const solver::Trajectory& traj, double t, double r);

}  // namespace blowup::diagnostics
