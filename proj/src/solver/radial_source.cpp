#include "blowup/solver/radial_source.hpp"

#include <algorithm>

namespace blowup::solver {

RadialSlice::RadialSlice(numerics::CubicSpline spline, double amplitude, double length, double tail)
    : spline_(std::move(spline)), amplitude_(amplitude), length_(length), tail_(tail) {}

double RadialSlice::value(double r) const {
  const double x = length_ * r;
  return amplitude_ * (x <= spline_.back() ? spline_(x) : tail_);
}

double RadialSlice::derivative(double r) const {
  const double x = length_ * r;
  return x <= spline_.back() ? amplitude_ * length_ * spline_.derivative(x) : 0.0;
}

std::vector<double> RadialSlice::knots_between(double a, double b) const {
  std::vector<double> out;
  const auto knots = spline_.knots();
  auto it = std::upper_bound(knots.begin(), knots.end(), length_ * a);
  for (; it != knots.end() && *it < length_ * b; ++it) out.push_back(*it / length_);
  return out;
}

RadialSlice TrajectorySource::make(std::vector<double> values) const {
  const double tail = traj_.mode == Mode::reaction_only ? values.back() : 0.0;
  return RadialSlice(radial_interpolant(*traj_.grid, values), 1.0, 1.0, tail);
}

RadialSlice TrajectorySource::slice(double t) const { return make(traj_.values_at(t)); }

RadialSlice TrajectorySource::rate(double t) const { return make(traj_.dudt_at(t)); }

}  // namespace blowup::solver
