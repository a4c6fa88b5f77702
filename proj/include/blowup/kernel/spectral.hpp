#pragma once

#include <json.hpp>
#include <span>
#include <vector>

#include "blowup/dimension.hpp"
#include "blowup/numerics/spline.hpp"

namespace blowup::kernel {

/// The negative eigenpair (-mu0, Z0) of -Delta - p W^{p-1} for radial
/// functions. Z0 is tabulated on a log-spaced radial grid, interpolated by a
/// cubic spline and continued past the table by its exponential tail
/// Z0(r) ~ r^{-(n-1)/2} exp(-sqrt(mu0) r). Immutable after construction.
class SpectralData {
 public:
  SpectralData() = default;
  /// `radii` must start at 0. Values are used as given (no renormalization).
  SpectralData(int n, double mu0, std::vector<double> radii, std::vector<double> values);

  int n() const { return n_; }
  double mu0() const { return mu0_; }
  /// int_{R^n} Z0^2 over the table plus tail.
  double l2_norm() const { return l2_norm_; }
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& values() const { return values_; }
  double tail_radius() const { return radii_.back(); }

  double z0(double r) const;
  double z0_derivative(double r) const;

  nlohmann::json to_json() const;
  /// Expects {n, mu0, radii[], values[]}; throws ConfigError when malformed.
  static SpectralData from_json(const nlohmann::json& j);

 private:
  int n_ = 0;
  double mu0_ = 0.0;
  double l2_norm_ = 0.0;
  std::vector<double> radii_;
  std::vector<double> values_;
  numerics::CubicSpline spline_;
};

struct GroundStateOptions {
  double r_max = 40.0;
  double tol = 1e-13;          // relative bisection width on mu
  int table_size = 4000;       // log-spaced table points
  int matrix_nodes = 2000;     // coarse level of the matrix eigensolve
  double consistency_tol = 1e-5;
  double tail_threshold = 1e-10;  // table stops once Z0/Z0(0) drops below this
};

/// mu0 by shooting from r = 0 and bisecting on the sign of Z at r_max.
/// Throws BracketError when (0, p W(0)^{p-1}] does not bracket a sign change.
double shoot_negative_eigenvalue(const Dimension& dim, double r_max, double tol);

/// Lowest eigenvalues of the discrete radial operator -Delta_h - p W^{p-1} on
/// a uniform grid over [0, r_max] with Dirichlet data at r_max.
struct DiscreteSpectrum {
  std::vector<double> lowest;  // ascending
  int negative_count = 0;
};
DiscreteSpectrum radial_operator_spectrum(const Dimension& dim, double r_max, int nodes, int keep = 4);

/// mu0 from the matrix route: Richardson extrapolation of the lowest
/// eigenvalue on `nodes` and 2 * `nodes`.
double matrix_negative_eigenvalue(const Dimension& dim, double r_max, int nodes);

/// (-Delta_h - p W^{p-1}) v at every node but the last, for nodes starting at 0.
std::vector<double> radial_operator_apply(const Dimension& dim, std::span<const double> nodes,
                                          std::span<const double> values);

/// Computes (mu0, Z0): shooting for the eigenvalue and profile, confirmed by the
/// matrix route. Throws ConsistencyError if the two disagree beyond
/// options.consistency_tol (relative). Z0 is normalized to unit L2 norm with Z0(0) > 0.
SpectralData ground_state(const Dimension& dim, const GroundStateOptions& options = {});

/// ground_state with default options, computed once per dimension.
const SpectralData& cached_ground_state(const Dimension& dim);

}  // namespace blowup::kernel
