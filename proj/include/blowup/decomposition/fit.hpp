#pragma once

#include <string>
#include <vector>

#include "blowup/decomposition/sampler.hpp"
#include "blowup/kernel/bubble.hpp"
#include "blowup/kernel/spectral.hpp"

namespace blowup::decomposition {

struct FitOptions {
  double K = 20.0;             // cutoff eta(|y|/K), support |y| < 2K
  double tol_orth = 1e-10;     // absolute, on every orthogonality integral
  int max_iterations = 50;
  int max_halvings = 8;
  int sphere_order = 3;        // angular Gauss points per polar angle
  int radial_order = 8;        // Gauss-Legendre points per radial panel
  double rcond_min = 1e-12;
  double dominance_limit = 1.0;  // max_i sum_{j != i} |J_ij| / sqrt(|J_ii J_jj|)
  double certificate_factor = 10.0;
};

/// sup |lambda^{(n-2)/2} phi(xi + lambda y)| over the quadrature points with
/// inner <= |y| < outer.
struct AnnulusNorm {
  double inner = 0.0;
  double outer = 0.0;
  double sup = 0.0;
};

struct DecompositionResult {
  kernel::BubbleParams params;
  /// int [u - W - a Z_0] eta_K Z_i dx for i = 0..n+1, each Z_i scaled to unit
  /// norm in L^2(eta_K dy). The radial solve leaves the translation entries at 0.
  std::vector<double> residuals;
  std::vector<AnnulusNorm> error_field_norms;
  int iterations = 0;
  bool converged = false;
  bool radial = false;
  double rcond = 0.0;
  double dominance = 0.0;
  /// max |residual| under the independent rule; NaN until certified.
  double certificate = std::numeric_limits<double>::quiet_NaN();
  bool certified = false;
  std::string failure;

  double max_residual() const;
};

/// Damped Newton on the n+2 orthogonality conditions for (a, xi, lambda).
DecompositionResult fit_orthogonal(const FieldSampler& u, const kernel::BubbleParams& guess,
                                   const kernel::SpectralData& spectral, const FitOptions& options = {});

/// xi pinned to the origin; solves conditions 0 and n+1 for (a, lambda) with
/// radial quadrature. Needs u.radial().
DecompositionResult fit_orthogonal_radial(const FieldSampler& u, double lambda_guess, double a_guess,
                                          const kernel::SpectralData& spectral, const FitOptions& options = {});

/// The n+2 orthogonality integrals at `params`. `independent` switches to the
/// certificate rule (other radial panels and order, rotated azimuths).
std::vector<double> orthogonality_residuals(const FieldSampler& u, const kernel::BubbleParams& params,
                                            const kernel::SpectralData& spectral, const FitOptions& options = {},
                                            bool independent = false, bool radial = false);

/// Re-evaluates the residuals of a converged fit with the independent rule and
/// records the outcome on `result`.
bool certify(const FieldSampler& u, DecompositionResult& result, const kernel::SpectralData& spectral,
             const FitOptions& options = {});

/// Local maximum of u reached by ascent from `start`.
Point ascend_to_max(const FieldSampler& u, const Point& start, int max_iterations = 400);

/// Warm start at a maximum of u: xi = argmax, lambda = u(xi)^{-2/(n-2)}, a = 0.
kernel::BubbleParams max_point_guess(const FieldSampler& u, const Point& start);

}  // namespace blowup::decomposition
