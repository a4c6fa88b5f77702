#pragma once

#include <memory>

#include "blowup/dimension.hpp"
#include "blowup/numerics/spline.hpp"
#include "blowup/solver/trajectory.hpp"

namespace blowup::solver {

/// A radial function r -> amplitude * f(length * r), where f is a spline on
/// [0, R] continued by the constant `tail` beyond R.
class RadialSlice {
 public:
  RadialSlice(numerics::CubicSpline spline, double amplitude = 1.0, double length = 1.0, double tail = 0.0);

  double value(double r) const;
  double derivative(double r) const;
  /// Radius past which the slice equals the constant tail.
  double data_radius() const { return spline_.back() / length_; }
  double tail() const { return amplitude_ * tail_; }
  /// Breakpoints of the underlying spline inside [a, b], in slice units.
  std::vector<double> knots_between(double a, double b) const;
  /// r -> amplitude * this(length * r).
  RadialSlice scaled(double amplitude, double length) const {
    return RadialSlice(spline_, amplitude_ * amplitude, length_ * length, tail_);
  }

 private:
  numerics::CubicSpline spline_;
  double amplitude_;
  double length_;
  double tail_;
};

/// u(r, t) on a time interval, radial in space. Slices are built on demand.
class RadialSource {
 public:
  virtual ~RadialSource() = default;
  virtual const Dimension& dim() const = 0;
  virtual double t_begin() const = 0;
  virtual double t_end() const = 0;
  /// u(., t); throws RangeError outside [t_begin, t_end].
  virtual RadialSlice slice(double t) const = 0;
  /// du/dt(., t); throws RangeError outside [t_begin, t_end].
  virtual RadialSlice rate(double t) const = 0;
};

/// Trajectory data as a RadialSource: cubic in r, linear in t. Full-mode
/// runs vanish past R; reaction-only runs keep their boundary value.
class TrajectorySource : public RadialSource {
 public:
  explicit TrajectorySource(const Trajectory& traj) : traj_(traj) {}

  const Dimension& dim() const override { return traj_.grid->dim(); }
  double t_begin() const override { return traj_.start_time(); }
  double t_end() const override { return traj_.end_time(); }
  RadialSlice slice(double t) const override;
  RadialSlice rate(double t) const override;
  const Trajectory& trajectory() const { return traj_; }

 private:
  RadialSlice make(std::vector<double> values) const;
  const Trajectory& traj_;
};

}  // namespace blowup::solver
