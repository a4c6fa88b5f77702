#include "blowup/numerics/spline.hpp"

#include <algorithm>

#include "blowup/error.hpp"

namespace blowup::numerics {

void solve_tridiagonal(std::span<const double> lower, std::span<const double> diag, std::span<const double> upper,
                       std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (n == 0) return;
  std::vector<double> c(n);
  double b = diag[0];
  c[0] = upper[0] / b;
  rhs[0] /= b;
  for (std::size_t i = 1; i < n; ++i) {
    b = diag[i] - lower[i] * c[i - 1];
    c[i] = (i + 1 < n) ? upper[i] / b : 0.0;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / b;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y, std::optional<double> left_slope,
                         std::optional<double> right_slope)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw DomainError("spline needs >= 2 knots and matching values");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw DomainError("spline knots must be strictly increasing");

  std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    lo[i] = h0 / 6.0;
    di[i] = (h0 + h1) / 3.0;
    up[i] = h1 / 6.0;
    rhs[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
  }
  const double hl = x_[1] - x_[0];
  if (left_slope) {
    di[0] = hl / 3.0;
    up[0] = hl / 6.0;
    rhs[0] = (y_[1] - y_[0]) / hl - *left_slope;
  } else {
    di[0] = 1.0;
  }
  const double hr = x_[n - 1] - x_[n - 2];
  if (right_slope) {
    lo[n - 1] = hr / 6.0;
    di[n - 1] = hr / 3.0;
    rhs[n - 1] = *right_slope - (y_[n - 1] - y_[n - 2]) / hr;
  } else {
    di[n - 1] = 1.0;
  }
  solve_tridiagonal(lo, di, up, rhs);
  m_ = std::move(rhs);
}

std::size_t CubicSpline::locate(double t) const {
  if (t <= x_.front()) return 0;
  if (t >= x_.back()) return x_.size() - 2;
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  return static_cast<std::size_t>(it - x_.begin()) - 1;
}

void CubicSpline::evaluate(double t, double& v, double& dv) const {
  const std::size_t i = locate(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  v = a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
  dv = (y_[i + 1] - y_[i]) / h + (-(3.0 * a * a - 1.0) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
}

double CubicSpline::value(double t) const {
  double v, dv;
  evaluate(t, v, dv);
  return v;
}

double CubicSpline::derivative(double t) const {
  double v, dv;
  evaluate(t, v, dv);
  return dv;
}

double CubicSpline::second_derivative(double t) const {
  const std::size_t i = locate(t);
  const double h = x_[i + 1] - x_[i];
  const double b = std::clamp((t - x_[i]) / h, 0.0, 1.0);
  return (1.0 - b) * m_[i] + b * m_[i + 1];
}

}  // namespace blowup::numerics
