#include "blowup/solver/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blowup/error.hpp"
#include "blowup/numerics/dopri5.hpp"
#include "blowup/numerics/spline.hpp"

namespace blowup::solver {

namespace {

inline double reaction(double u, double p) { return std::pow(std::abs(u), p - 1.0) * u; }

double error_scale(const SolverConfig& config, double sup) { return config.atol + config.rtol * sup; }

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// One IMEX Euler step of size dt from u into out.
void imex_euler(const RadialGrid& grid, std::span<const double> u, double dt, Mode mode, std::vector<double>& out) {
  const double p = grid.dim().p;
  const std::size_t size = u.size();
  out.resize(size);
  if (mode == Mode::reaction_only) {
    for (std::size_t i = 0; i < size; ++i) out[i] = u[i] + dt * reaction(u[i], p);
    return;
  }
  const auto& st = grid.stencil();
  const std::size_t m = size - 1;  // unknowns 0..m-1, u_m = 0
  std::vector<double> lo(m, 0.0), di(m), up(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double fr = st.face[i];
    const double fl = i > 0 ? st.face[i - 1] : 0.0;
    di[i] = st.volume[i] + dt * (fl + fr);
    if (i > 0) lo[i] = -dt * fl;
    if (i + 1 < m) up[i] = -dt * fr;
    out[i] = st.volume[i] * (u[i] + dt * reaction(u[i], p));
  }
  numerics::solve_tridiagonal(lo, di, up, std::span<double>(out.data(), m));
  out[m] = 0.0;
}

// Gershgorin bound on the spectral radius of Delta_h.
double diffusion_spectral_radius(const RadialGrid& grid) {
  const auto& st = grid.stencil();
  double rho = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double f = st.face[i] + (i > 0 ? st.face[i - 1] : 0.0);
    rho = std::max(rho, 2.0 * f / st.volume[i]);
  }
  return rho;
}

double step_increment(const RadialGrid& grid, std::span<const double> a, std::span<const double> b, double dt) {
  const auto& st = grid.stencil();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = (b[i] - a[i]) / dt;
    s += st.volume[i] * d * d;
  }
  return grid.dim().sphere_area() * s * dt;
}

}  // namespace

std::vector<double> discrete_laplacian(const RadialGrid& grid, std::span<const double> values) {
  const std::size_t m = grid.size() - 1;
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < m; ++i) out[i] = grid.stencil().laplacian(values, i);
  // Quadratic extrapolation from nodes m-3, m-2, m-1.
  const double x0 = grid[m - 3], x1 = grid[m - 2], x2 = grid[m - 1], x = grid[m];
  const double l0 = (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2));
  const double l1 = (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2));
  const double l2 = (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
  out[m] = l0 * out[m - 3] + l1 * out[m - 2] + l2 * out[m - 1];
  return out;
}

RadialField discrete_laplacian(const RadialField& field) {
  return RadialField(field.grid, discrete_laplacian(*field.grid, field.values), field.time);
}

std::vector<double> semi_discrete_rhs(const RadialGrid& grid, std::span<const double> values, Mode mode) {
  const double p = grid.dim().p;
  std::vector<double> out(values.size());
  if (mode == Mode::reaction_only) {
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = reaction(values[i], p);
    return out;
  }
  const std::size_t m = values.size() - 1;
  for (std::size_t i = 0; i < m; ++i) out[i] = grid.stencil().laplacian(values, i) + reaction(values[i], p);
  out[m] = 0.0;
  return out;
}

StepResult step(const RadialField& field, double dt, const SolverConfig& config) {
  if (dt < 0.0) throw DomainError("step size must be non-negative");
  const RadialGrid& grid = *field.grid;
  StepResult result;
  result.field = field;
  if (dt == 0.0) {
    if (result.field.dudt.empty()) result.field.dudt = semi_discrete_rhs(grid, field.values, config.mode);
    return result;
  }

  std::vector<double> next;
  std::vector<double> err(field.values.size());
  if (config.scheme == Scheme::imex) {
    std::vector<double> coarse, half;
    imex_euler(grid, field.values, dt, config.mode, coarse);
    imex_euler(grid, field.values, 0.5 * dt, config.mode, half);
    imex_euler(grid, half, 0.5 * dt, config.mode, next);
    for (std::size_t i = 0; i < err.size(); ++i) err[i] = next[i] - coarse[i];
  } else {
    const auto rhs = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
      dy = semi_discrete_rhs(grid, y, config.mode);
    };
    numerics::dopri5_step(rhs, field.time, field.values, dt, next, err);
  }
  const double scale = error_scale(config, std::max(field.sup(), max_abs(next)));
  result.error = max_abs(err) / scale;
  if (!std::isfinite(result.error)) result.error = std::numeric_limits<double>::infinity();
  result.field.values = std::move(next);
  result.field.time = field.time + dt;
  result.field.dudt = semi_discrete_rhs(grid, result.field.values, config.mode);
  return result;
}

Trajectory run_until_blowup(const RadialField& u0, const SolverConfig& config,
                            const std::function<bool(const RadialField&)>& progress) {
  if (!u0.grid) throw DomainError("initial field has no grid");
  if (!u0.finite()) throw DomainError("initial field has non-finite values");
  if (!(config.rtol > 0.0) || !(config.c_safe > 0.0) || !(config.u_max > 0.0) || !(config.dt_initial > 0.0))
    throw DomainError("solver tolerances, c_safe, u_max and dt_initial must be positive");
  const RadialGrid& grid = *u0.grid;
  const double p = grid.dim().p;
  const double order = config.scheme == Scheme::imex ? 2.0 : 5.0;
  double dt_stability = std::numeric_limits<double>::infinity();
  if (config.scheme == Scheme::explicit_rk && config.mode == Mode::full)
    dt_stability = 3.0 / diffusion_spectral_radius(grid);

  Trajectory traj;
  traj.grid = u0.grid;
  traj.mode = config.mode;

  RadialField u = u0;
  if (config.mode == Mode::full) u.values.back() = 0.0;
  u.dudt = semi_discrete_rhs(grid, u.values, config.mode);
  traj.snapshots.push_back(u);
  traj.sup_history.push_back({u.time, u.sup(), 0.0});

  double dt = config.dt_initial;
  double last_snap_log = std::log(std::max(u.sup(), 1e-300));
  double last_snap_time = u.time;
  long steps = 0;
  int failures = 0;

  const auto finish = [&](Termination why, const std::string& note) {
    traj.termination = why;
    traj.diagnostic = note;
    if (traj.snapshots.back().time != u.time) traj.snapshots.push_back(u);
    return traj;
  };

  while (true) {
    const double sup = u.sup();
    if (sup >= config.u_max) return finish(Termination::blowup, "sup norm reached u_max");
    if (u.time >= config.t_max) return finish(Termination::time_limit, "reached t_max");
    if (steps >= config.max_steps) return finish(Termination::step_limit, "reached max_steps");

    const double cap = config.c_safe * std::pow(std::max(sup, 1e-300), -(p - 1.0));
    double h = std::min({dt, cap, dt_stability, config.t_max - u.time});
    if (!(u.time + h > u.time)) {
      traj.flagged = true;
      return finish(Termination::aborted, "step size underflow at t = " + std::to_string(u.time));
    }

    StepResult trial = step(u, h, config);
    if (!trial.field.finite() || !std::isfinite(trial.error)) {
      if (++failures > 30) {
        traj.flagged = true;
        return finish(Termination::aborted, "non-finite state at t = " + std::to_string(u.time));
      }
      dt = 0.1 * h;
      continue;
    }
    const double factor = std::clamp(0.9 * std::pow(std::max(trial.error, 1e-10), -1.0 / order), 0.2, 2.0);
    if (trial.error > 1.0) {
      dt = h * std::min(factor, 0.9);
      continue;
    }
    failures = 0;
    ++steps;
    traj.budget.add(trial.field.time, step_increment(grid, u.values, trial.field.values, h));
    u = std::move(trial.field);
    const double new_sup = u.sup();
    traj.sup_history.push_back({u.time, new_sup, h});
    const double log_sup = std::log(std::max(new_sup, 1e-300));
    if (std::abs(log_sup - last_snap_log) >= config.snapshot_log_stride ||
        u.time - last_snap_time >= config.snapshot_time_stride) {
      traj.snapshots.push_back(u);
      last_snap_log = log_sup;
      last_snap_time = u.time;
    }
    dt = h * factor;
    if (progress && !progress(u)) return finish(Termination::step_limit, "stopped by caller");
  }
}

double localized_energy(const RadialGrid& grid, std::span<const double> values, const RadialCutoff& eta) {
  const auto& st = grid.stencil();
  const double p = grid.dim().p;
  double grad = 0.0;
  double pot = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double e = eta(0.5 * (grid[i] + grid[i + 1]));
    const double d = values[i + 1] - values[i];
    grad += 0.5 * st.face[i] * d * d * e * e;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double e = eta(grid[i]);
    pot += st.volume[i] * std::pow(std::abs(values[i]), p + 1.0) / (p + 1.0) * e * e;
  }
  return grid.dim().sphere_area() * (grad - pot);
}

double localized_energy_flux(const RadialGrid& grid, std::span<const double> values, std::span<const double> dudt,
                             const RadialCutoff& eta) {
  const auto& st = grid.stencil();
  const std::size_t m = grid.size() - 1;
  double s = 0.0;
  for (std::size_t i = 0; i <= m; ++i) {
    const double e = eta(grid[i]);
    double ur = 0.0;
    if (i > 0 && i < m) ur = (values[i + 1] - values[i - 1]) / (grid[i + 1] - grid[i - 1]);
    if (i == m) ur = (values[m] - values[m - 1]) / (grid[m] - grid[m - 1]);
    s += st.volume[i] * (-dudt[i] * dudt[i] * e * e - 2.0 * e * eta.derivative(grid[i]) * dudt[i] * ur);
  }
  return grid.dim().sphere_area() * s;
}

std::vector<EnergyIdentitySample> energy_identity_residual(const Trajectory& traj, const RadialCutoff& eta) {
  std::vector<EnergyIdentitySample> out;
  const RadialGrid& grid = *traj.grid;
  if (traj.snapshots.size() < 2) return out;
  std::vector<double> energy(traj.snapshots.size());
  std::vector<double> flux(traj.snapshots.size());
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    energy[k] = localized_energy(grid, traj.snapshots[k].values, eta);
    flux[k] = localized_energy_flux(grid, traj.snapshots[k].values, traj.snapshot_dudt(k), eta);
  }
  for (std::size_t k = 0; k + 1 < traj.snapshots.size(); ++k) {
    EnergyIdentitySample s;
    s.t0 = traj.snapshots[k].time;
    s.t1 = traj.snapshots[k + 1].time;
    s.lhs = (energy[k + 1] - energy[k]) / (s.t1 - s.t0);
    s.rhs = 0.5 * (flux[k] + flux[k + 1]);
    s.residual = s.lhs - s.rhs;
    out.push_back(s);
  }
  return out;
}

}  // namespace blowup::solver
