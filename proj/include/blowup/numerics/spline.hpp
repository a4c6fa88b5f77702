#pragma once

#include <optional>
#include <span>
#include <vector>

namespace blowup::numerics {

/// Cubic spline on strictly increasing, possibly non-uniform knots.
/// Each end is clamped to a given slope or left natural.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y, std::optional<double> left_slope = std::nullopt,
              std::optional<double> right_slope = std::nullopt);

  double operator()(double t) const { return value(t); }
  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  /// value and first derivative in one lookup
  void evaluate(double t, double& v, double& dv) const;

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  bool empty() const { return x_.empty(); }
  std::span<const double> knots() const { return x_; }
  std::span<const double> values() const { return y_; }

 private:
  std::size_t locate(double t) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at knots
};

/// Solves a tridiagonal system in place (Thomas algorithm). `lower[0]` and
/// `upper[n-1]` are ignored. Overwrites rhs with the solution.
void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper,
                       std::span<double> rhs);

}  // namespace blowup::numerics
