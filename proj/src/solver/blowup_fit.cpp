#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <span>

#include "blowup/error.hpp"
#include "blowup/solver/integrator.hpp"

namespace blowup::solver {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ssr = 0.0;
};

// log sup against log(T - t) for T = t_ref + exp(z); differences are taken
// from t_ref so that T - t keeps its digits close to the blowup time.
LineFit fit_for(std::span<const SupSample> w, double t_ref, double z) {
  const double gap = std::exp(z);
  const double m = static_cast<double>(w.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& s : w) {
    const double x = std::log((t_ref - s.t) + gap);
    const double y = std::log(s.sup);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  LineFit f;
  const double det = m * sxx - sx * sx;
  f.slope = (m * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / m;
  for (const auto& s : w) {
    const double r = std::log(s.sup) - f.intercept - f.slope * std::log((t_ref - s.t) + gap);
    f.ssr += r * r;
  }
  return f;
}

struct Fitted {
  double T;
  LineFit line;
};

Fitted fit_window(std::span<const SupSample> w) {
  const double t_ref = w.back().t;
  const double span = std::max(t_ref - w.front().t, 1e-300);
  // Coarse scan of the gap T - t_last over many decades, then Brent.
  const double z_lo = std::log(span * 1e-12);
  const double z_hi = std::log(span * 10.0);
  constexpr int kScan = 240;
  int best = 0;
  double best_ssr = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= kScan; ++k) {
    const double z = z_lo + (z_hi - z_lo) * k / kScan;
    const double ssr = fit_for(w, t_ref, z).ssr;
    if (ssr < best_ssr) {
      best_ssr = ssr;
      best = k;
    }
  }
  const double dz = (z_hi - z_lo) / kScan;
  const double a = z_lo + std::max(best - 1, 0) * dz;
  const double b = z_lo + std::min(best + 1, kScan) * dz;
  const auto [z, ssr] = boost::math::tools::brent_find_minima(
      [&](double zz) { return fit_for(w, t_ref, zz).ssr; }, a, b, 52);
  (void)ssr;
  return {t_ref + std::exp(z), fit_for(w, t_ref, z)};
}

double decades_of(std::span<const SupSample> w) {
  double lo = w.front().sup;
  for (const auto& s : w) lo = std::min(lo, s.sup);
  return std::log10(w.back().sup / lo);
}

}  // namespace

BlowupEstimate estimate_blowup_time(const Trajectory& traj, const BlowupFitOptions& options) {
  const auto& h = traj.sup_history;
  if (h.size() < 8) throw FitQualityError("sup history too short for a blowup fit");
  const double top = h.back().sup;
  if (!(top > 0.0)) throw FitQualityError("sup norm vanished");
  const double floor = top * std::pow(10.0, -options.window_decades);
  std::size_t first = h.size() - 1;
  while (first > 0 && h[first - 1].sup >= floor && h[first - 1].sup > 0.0) --first;
  const std::span<const SupSample> window(h.data() + first, h.size() - first);
  const double decades = decades_of(window);
  if (window.size() < 8 || decades < options.min_decades)
    throw FitQualityError("sup norm grows by only " + std::to_string(decades) + " decades (need " +
                          std::to_string(options.min_decades) + ")");

  const Fitted full = fit_window(window);
  BlowupEstimate est;
  est.T = full.T;
  est.exponent = -full.line.slope;
  est.kappa_fit = std::exp(full.line.intercept);
  est.decades = decades;
  est.samples = window.size();
  est.rms_residual = std::sqrt(full.line.ssr / window.size());

  // Spread of T over the lower and upper halves of the window (in log sup).
  const double mid = std::sqrt(top * window.front().sup);
  std::size_t split = 0;
  while (split < window.size() && window[split].sup < mid) ++split;
  for (const auto part : {window.subspan(0, split), window.subspan(split)}) {
    if (part.size() < 8 || decades_of(part) < 0.5) continue;
    est.uncertainty = std::max(est.uncertainty, std::abs(fit_window(part).T - est.T));
  }
  return est;
}

}  // namespace blowup::solver
