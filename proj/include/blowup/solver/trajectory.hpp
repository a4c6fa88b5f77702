#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blowup/solver/grid.hpp"

namespace blowup::solver {

enum class Mode { full, reaction_only };
enum class Scheme { imex, explicit_rk };
enum class Termination { blowup, time_limit, step_limit, aborted };

std::string to_string(Mode mode);
std::string to_string(Scheme scheme);
std::string to_string(Termination termination);
Mode mode_from_string(const std::string& name);
Scheme scheme_from_string(const std::string& name);
Termination termination_from_string(const std::string& name);

/// One accepted step: time reached, sup norm there, and the step size taken.
struct SupSample {
  double t = 0.0;
  double sup = 0.0;
  double dt = 0.0;
};

/// Running total of int int |u_t|^2 dx dt, one increment per accepted step.
struct TimeDerivativeBudget {
  std::vector<double> times;
  std::vector<double> increments;
  std::vector<double> cumulative;

  void add(double t, double increment);
  double total() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
  /// Cumulative value at the last step with time <= t (0 before the first).
  double at(double t) const;
};

struct BlowupEstimate {
  double T = 0.0;
  double uncertainty = 0.0;
  double exponent = 0.0;   // fitted beta in sup ~ kappa_fit (T - t)^{-beta}
  double kappa_fit = 0.0;
  double decades = 0.0;    // sup-norm growth spanned by the fit window
  std::size_t samples = 0;
  double rms_residual = 0.0;  // in log sup
};

/// Time-ordered snapshots (decimated) plus a dense per-step sup-norm history.
struct Trajectory {
  GridPtr grid;
  Mode mode = Mode::full;
  std::vector<RadialField> snapshots;
  std::vector<SupSample> sup_history;
  TimeDerivativeBudget budget;
  std::optional<BlowupEstimate> t_est;
  Termination termination = Termination::time_limit;
  bool flagged = false;  // partial result after an abort
  std::string diagnostic;

  /// A trajectory made of given fields (synthetic data); sup_history gets one
  /// sample per snapshot. Throws DomainError unless times increase strictly
  /// and every field lives on `grid`.
  static Trajectory from_snapshots(GridPtr grid, std::vector<RadialField> fields, Mode mode = Mode::full);

  double start_time() const { return snapshots.front().time; }
  double end_time() const { return snapshots.back().time; }
  bool covers(double t) const;

  /// Nodal values at time t, linear in time between snapshots.
  /// Throws RangeError outside [start_time, end_time].
  std::vector<double> values_at(double t) const;
  /// du/dt at time t: stored scheme derivatives when present, otherwise
  /// differences of neighbouring snapshots.
  std::vector<double> dudt_at(double t) const;
  /// du/dt at snapshot k by the same rule.
  std::vector<double> snapshot_dudt(std::size_t k) const;

 private:
  std::size_t interval(double t) const;
};

}  // namespace blowup::solver
