#pragma once

#include <functional>
#include <span>
#include <vector>

#include "blowup/cutoff.hpp"
#include "blowup/solver/trajectory.hpp"

namespace blowup::solver {

struct SolverConfig {
  Mode mode = Mode::full;
  Scheme scheme = Scheme::imex;
  double rtol = 1e-6;   // local error relative to the current sup norm
  double atol = 1e-12;
  double c_safe = 0.1;  // dt <= c_safe * sup^{-(p-1)}
  double u_max = 1e8;
  double t_max = 50.0;
  double dt_initial = 1e-4;
  long max_steps = 20'000'000;
  double snapshot_log_stride = 0.05;  // new snapshot once log(sup) moved this much
  double snapshot_time_stride = 0.1;  // or this much time passed
};

/// Delta_h u at every node. Interior and origin use the finite-volume stencil
/// (exact on quadratics); the boundary node gets the quadratic extrapolation
/// of the three interior values.
std::vector<double> discrete_laplacian(const RadialGrid& grid, std::span<const double> values);
RadialField discrete_laplacian(const RadialField& field);

/// Semi-discrete right-hand side Delta_h u + |u|^{p-1} u (reaction only: the
/// second term). Full mode pins the Dirichlet node: rhs_M = 0.
std::vector<double> semi_discrete_rhs(const RadialGrid& grid, std::span<const double> values, Mode mode);

struct StepResult {
  RadialField field;  // time advanced by dt, dudt filled
  double error = 0.0; // embedded error estimate in units of the tolerance
};

/// One step of size dt. IMEX: implicit Euler in diffusion, explicit in
/// reaction, with a step-doubling error estimate (the two half steps are
/// returned). explicit_rk: Dormand-Prince 5(4). dt = 0 returns the input.
StepResult step(const RadialField& field, double dt, const SolverConfig& config);

/// Integrates until sup >= u_max, t >= t_max or max_steps, with
/// dt = min(error-controlled dt, c_safe sup^{-(p-1)}). Full mode sets u(R) = 0
/// on the initial data. A non-finite state ends the run with an aborted,
/// flagged partial trajectory. `progress`, if set, sees every accepted state
/// and may return false to stop (recorded as a step limit).
Trajectory run_until_blowup(const RadialField& u0, const SolverConfig& config,
                            const std::function<bool(const RadialField&)>& progress = {});

struct BlowupFitOptions {
  double window_decades = 4.0;  // fit the last decades of sup growth
  double min_decades = 3.0;
};

/// Least-squares fit of log sup = log kappa_fit - beta log(T - t) with T free.
/// Throws FitQualityError when the window spans < min_decades of growth.
BlowupEstimate estimate_blowup_time(const Trajectory& traj, const BlowupFitOptions& options = {});

/// Discrete localized energy identity between consecutive snapshots:
/// lhs = dE/dt by differencing E(t) = int [|grad u|^2 / 2 - |u|^{p+1}/(p+1)] eta^2,
/// rhs = trapezoidal mean of -int |u_t|^2 eta^2 - 2 int eta u_t grad u . grad eta.
struct EnergyIdentitySample {
  double t0 = 0.0;
  double t1 = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // lhs - rhs
};

/// Localized energy E(t) of nodal values with cutoff eta.
double localized_energy(const RadialGrid& grid, std::span<const double> values, const RadialCutoff& eta);
/// -int |u_t|^2 eta^2 - 2 int eta u_t grad u . grad eta (the cross term comes
/// from integrating grad u . grad u_t eta^2 by parts).
double localized_energy_flux(const RadialGrid& grid, std::span<const double> values, std::span<const double> dudt,
                             const RadialCutoff& eta);

std::vector<EnergyIdentitySample> energy_identity_residual(const Trajectory& traj, const RadialCutoff& eta = {});

}  // namespace blowup::solver
