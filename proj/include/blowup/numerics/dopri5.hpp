#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace blowup::numerics {

/// One Dormand-Prince 5(4) step for y' = f(t, y). Writes the 5th-order
/// solution to y_out and the embedded difference (5th - 4th order) to err.
template <class Rhs>
void dopri5_step(const Rhs& f, double t, const std::vector<double>& y, double h, std::vector<double>& y_out,
                 std::vector<double>& err) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  const std::size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n);
  f(t, y, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
  f(t + c2 * h, tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  f(t + c3 * h, tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  f(t + c4 * h, tmp, k4);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  f(t + c5 * h, tmp, k5);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  f(t + h, tmp, k6);
  y_out.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    y_out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  f(t + h, y_out, k7);
  err.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
}

/// Integrates y' = f(t, y) from t0 to t1 with adaptive Dormand-Prince steps.
/// `observer(t, y)` is called after every accepted step and may return false
/// to stop early. Returns the final time reached.
template <class Rhs, class Observer>
double dopri5_integrate(const Rhs& f, double t0, double t1, std::vector<double>& y, double rtol, double atol,
                        double h0, const Observer& observer) {
  double t = t0;
  double h = std::min(h0, t1 - t0);
  std::vector<double> y_new, err;
  while (t < t1) {
    h = std::min(h, t1 - t);
    dopri5_step(f, t, y, h, y_new, err);
    double e = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      e = std::max(e, std::abs(err[i]) / sc);
    }
    if (!std::isfinite(e)) {
      h *= 0.1;
      if (h < 1e-300) break;
      continue;
    }
    if (e <= 1.0) {
      t = (t1 - t <= h) ? t1 : t + h;
      y.swap(y_new);
      if (!observer(t, y)) return t;
    }
    const double factor = (e == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
    h *= factor;
  }
  return t;
}

}  // namespace blowup::numerics
