#pragma once

#include <span>
#include <vector>

namespace blowup::numerics {

/// Finite-volume form of the radial Laplacian r^{1-n} (r^{n-1} u_r)_r on
/// nodes r_0 = 0 < r_1 < ... < r_M. Node i owns the shell between the
/// neighbouring midpoints; the last node owns a half shell.
///
///   (Delta_h u)_i = [F_{i+1/2} (u_{i+1} - u_i) - F_{i-1/2} (u_i - u_{i-1})] / V_i
///
/// with F_{i+1/2} = r_{i+1/2}^{n-1} / (r_{i+1} - r_i) and V_i the shell
/// volume divided by |S^{n-1}|. Exact on quadratics; at r = 0 it reduces to
/// the ghost-node stencil 2n (u_1 - u_0) / r_1^2.
struct RadialStencil {
  std::vector<double> volume;  // V_i, size M+1
  std::vector<double> face;    // F_{i+1/2}, size M

  RadialStencil() = default;
  RadialStencil(std::span<const double> nodes, int n);

  /// Applies Delta_h at node i (0 <= i < M).
  double laplacian(std::span<const double> u, std::size_t i) const {
    double flux = face[i] * (u[i + 1] - u[i]);
    if (i > 0) flux -= face[i - 1] * (u[i] - u[i - 1]);
    return flux / volume[i];
  }
};

}  // namespace blowup::numerics
