#include "blowup/solver/grid.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/error.hpp"

namespace blowup::solver {

std::string to_string(SpacingPolicy policy) { return policy == SpacingPolicy::uniform ? "uniform" : "graded"; }

SpacingPolicy spacing_policy_from_string(const std::string& name) {
  if (name == "uniform") return SpacingPolicy::uniform;
  if (name == "graded") return SpacingPolicy::graded;
  throw ConfigError("unknown grid spacing policy '" + name + "'");
}

RadialGrid::RadialGrid(Dimension dim, std::vector<double> nodes, SpacingPolicy policy)
    : dim_(dim), nodes_(std::move(nodes)), policy_(policy) {
  if (nodes_.size() < 17) throw DomainError("radial grid needs at least 16 cells");
  if (nodes_.front() != 0.0) throw DomainError("radial grid must start at r = 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1])) throw DomainError("radial grid nodes must be strictly increasing");
  stencil_ = numerics::RadialStencil(nodes_, dim_.n);
}

GridPtr RadialGrid::make(const Dimension& dim, const GridSpec& spec) {
  if (spec.policy == SpacingPolicy::uniform) return uniform(dim, spec.radius, spec.cells);
  return graded(dim, spec.radius, spec.ratio, spec.h_min, spec.h_max);
}

GridPtr RadialGrid::uniform(const Dimension& dim, double radius, int cells) {
  if (!(radius > 0.0)) throw DomainError("grid radius must be positive");
  if (cells < 16) throw DomainError("radial grid needs at least 16 cells");
  std::vector<double> r(cells + 1);
  for (int i = 0; i <= cells; ++i) r[i] = radius * i / cells;
  r.back() = radius;
  return std::make_shared<const RadialGrid>(dim, std::move(r), SpacingPolicy::uniform);
}

GridPtr RadialGrid::graded(const Dimension& dim, double radius, double ratio, double h_min, double h_max) {
  if (!(radius > 0.0) || !(ratio >= 1.0) || !(h_min > 0.0) || !(h_max >= h_min))
    throw DomainError("graded grid needs R > 0, ratio >= 1 and 0 < h_min <= h_max");
  std::vector<double> r{0.0};
  double h = h_min;
  while (r.back() + h < radius) {
    r.push_back(r.back() + h);
    h = std::min(h * ratio, h_max);
  }
  // Merge a sliver last cell into its neighbour.
  if (radius - r.back() < 0.5 * h && r.size() > 1) r.pop_back();
  r.push_back(radius);
  return std::make_shared<const RadialGrid>(dim, std::move(r), SpacingPolicy::graded);
}

double RadialGrid::integrate(std::span<const double> f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) s += stencil_.volume[i] * f[i];
  return dim_.sphere_area() * s;
}

RadialField::RadialField(GridPtr g, std::vector<double> v, double t) : grid(std::move(g)), values(std::move(v)), time(t) {
  if (!grid) throw DomainError("radial field needs a grid");
  if (values.size() != grid->size()) throw DomainError("field size does not match its grid");
}

double RadialField::sup() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

bool RadialField::finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

numerics::CubicSpline RadialField::interpolant() const { return radial_interpolant(*grid, values); }

numerics::CubicSpline radial_interpolant(const RadialGrid& grid, std::span<const double> values) {
  const auto nodes = grid.nodes();
  return numerics::CubicSpline(std::vector<double>(nodes.begin(), nodes.end()),
                               std::vector<double>(values.begin(), values.end()), 0.0, std::nullopt);
}

}  // namespace blowup::solver
