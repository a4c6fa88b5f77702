#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "blowup/dimension.hpp"
#include "blowup/numerics/radial_stencil.hpp"
#include "blowup/numerics/spline.hpp"

namespace blowup::solver {

enum class SpacingPolicy { uniform, graded };

std::string to_string(SpacingPolicy policy);
SpacingPolicy spacing_policy_from_string(const std::string& name);

struct GridSpec {
  SpacingPolicy policy = SpacingPolicy::graded;
  double radius = 20.0;
  int cells = 2000;       // uniform grids: M
  double ratio = 1.02;    // graded grids: geometric growth of the spacing
  double h_min = 1e-5;    // graded grids: spacing at r = 0
  double h_max = 0.01;    // graded grids: spacing cap
};

/// Radial mesh r_0 = 0 < r_1 < ... < r_M = R for the ball B_R in R^n.
class RadialGrid {
 public:
  /// Validates M >= 16, r_0 = 0 and strict monotonicity; throws DomainError.
  RadialGrid(Dimension dim, std::vector<double> nodes, SpacingPolicy policy);

  static std::shared_ptr<const RadialGrid> make(const Dimension& dim, const GridSpec& spec);
  static std::shared_ptr<const RadialGrid> uniform(const Dimension& dim, double radius, int cells);
  /// Spacing h_min * ratio^k, capped at h_max, last cell stretched to land on R.
  static std::shared_ptr<const RadialGrid> graded(const Dimension& dim, double radius, double ratio, double h_min,
                                                  double h_max);

  const Dimension& dim() const { return dim_; }
  double radius() const { return nodes_.back(); }
  std::size_t size() const { return nodes_.size(); }
  std::size_t cells() const { return nodes_.size() - 1; }
  std::span<const double> nodes() const { return nodes_; }
  double operator[](std::size_t i) const { return nodes_[i]; }
  SpacingPolicy policy() const { return policy_; }
  const numerics::RadialStencil& stencil() const { return stencil_; }

  /// int_{B_R} f dx for nodal values f, using the stencil's shell volumes.
  double integrate(std::span<const double> f) const;

 private:
  Dimension dim_;
  std::vector<double> nodes_;
  SpacingPolicy policy_;
  numerics::RadialStencil stencil_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Nodal values of u(., t) on a radial grid, optionally with the
/// semi-discrete time derivative at the same instant.
struct RadialField {
  GridPtr grid;
  std::vector<double> values;
  double time = 0.0;
  std::vector<double> dudt;  // empty when unknown

  RadialField() = default;
  RadialField(GridPtr g, std::vector<double> v, double t = 0.0);

  double sup() const;
  bool finite() const;
  /// Cubic spline in r with zero slope at the origin.
  numerics::CubicSpline interpolant() const;
};

/// Spline of nodal values on a grid (u'(0) = 0).
numerics::CubicSpline radial_interpolant(const RadialGrid& grid, std::span<const double> values);

}  // namespace blowup::solver
