#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "blowup/dimension.hpp"
#include "blowup/solver/radial_source.hpp"

namespace blowup::diagnostics {

/// Cutoff psi(|y| / radius) (psi = 1 on B_{3/4}, 0 outside B_1; an infinite
/// radius means psi = 1) and the constants of the correction C e^{-c/s}.
struct CutoffSpec {
  double radius = std::numeric_limits<double>::infinity();
  double c_mono = 100.0;   // C
  double c_decay = 0.01;   // c

  double psi(double r) const;
  double correction(double s) const;
  std::string id() const;
};

struct ThetaSample {
  Point base_point;
  double base_time = 0.0;
  double s = 0.0;
  double value = 0.0;
  std::string cutoff_id;
};

/// Spherical mean of the heat kernel: int_{S^{n-1}} G(r w - x, s) dw with |x| = d.
double spherical_heat_kernel(double r, double d, double s, const Dimension& dim);

/// Theta_s(x, t) of a radial solution, evaluated at time t - s:
///   s^{(p+1)/(p-1)} int [|grad u|^2/2 - |u|^{p+1}/(p+1)] G psi^2
///   + s^{2/(p-1)} / (2(p-1)) int u^2 G psi^2 + C e^{-c/s}.
/// Throws DomainError for s <= 0 and RangeError when t - s is outside the source.
ThetaSample theta(const solver::RadialSource& source, const Point& x, double t, double s, const CutoffSpec& cutoff);
ThetaSample theta(const solver::Trajectory& traj, const Point& x, double t, double s, const CutoffSpec& cutoff);

/// Theta without the C e^{-c/s} term.
double theta_bare(const solver::RadialSource& source, const Point& x, double t, double s, const CutoffSpec& cutoff);

struct MonotonicityViolation {
  double s_lo = 0.0;
  double s_hi = 0.0;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
};

struct MonotonicityReport {
  std::vector<ThetaSample> samples;
  std::vector<MonotonicityViolation> violations;  // empty means monotone
  bool monotone() const { return violations.empty(); }
};

/// Evaluates Theta at increasing s and lists every adjacent pair with
/// Theta_{s_{k+1}} < Theta_{s_k} - tol. Throws DomainError unless s_list is
/// increasing with at least three entries.
MonotonicityReport theta_monotonicity_report(const solver::RadialSource& source, const Point& x, double t,
                                             const std::vector<double>& s_list, const CutoffSpec& cutoff,
                                             double tol = 1e-4);
MonotonicityReport theta_monotonicity_report(const solver::Trajectory& traj, const Point& x, double t,
                                             const std::vector<double>& s_list, const CutoffSpec& cutoff,
                                             double tol = 1e-4);

enum class Verdict { regular, type1, type2, indeterminate };
std::string to_string(Verdict verdict);

struct ClassificationResult {
  Verdict verdict = Verdict::indeterminate;
  int bubbles = 0;               // N for Type II
  double theta_limit_est = 0.0;
  double confidence_band = 0.0;
  double slope_per_decade = 0.0; // relative change of Theta across the fitted decade
  std::vector<ThetaSample> samples;
  std::string note;
};

struct ClassifyOptions {
  std::optional<double> blowup_time;  // defaults to the trajectory's estimate
  std::optional<double> s_min;        // lower end of the fitted decade
  int points = 7;
  double tolerance = 0.1;             // relative match to a density
  double max_slope = 0.05;            // per decade, relative
};

/// Fits Theta_s (without the correction term) log-linearly over one decade of
/// s ending at the smallest resolved s, and matches the s -> 0 value against
/// 0, the Type I density and N times the Type II density. Throws DomainError
/// when no blowup time is available.
ClassificationResult classify(const solver::Trajectory& traj, const Point& x, const CutoffSpec& cutoff,
                              const ClassifyOptions& options = {});
ClassificationResult classify(const solver::RadialSource& source, double blowup_time, const Point& x,
                              const CutoffSpec& cutoff, const ClassifyOptions& options);

/// Theta_{r^2}(x, t) <= eps_star.
bool epsilon_regularity_flag(const solver::Trajectory& traj, const Point& x, double t, double r, double eps_star,
                             const CutoffSpec& cutoff = {});

/// 0.1 times the Type I density.
double default_eps_star(const Dimension& dim);

}  // namespace blowup::diagnostics
