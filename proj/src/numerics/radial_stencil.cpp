#include "blowup/numerics/radial_stencil.hpp"

#include <cmath>

#include "blowup/error.hpp"

namespace blowup::numerics {

RadialStencil::RadialStencil(std::span<const double> nodes, int n) {
  const std::size_t m = nodes.size();
  if (m < 2) throw DomainError("radial stencil needs at least two nodes");
  face.resize(m - 1);
  volume.resize(m);
  std::vector<double> mid(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    mid[i] = 0.5 * (nodes[i] + nodes[i + 1]);
    face[i] = std::pow(mid[i], n - 1) / (nodes[i + 1] - nodes[i]);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double lo = (i == 0) ? 0.0 : mid[i - 1];
    const double hi = (i + 1 < m) ? mid[i] : nodes[m - 1];
    volume[i] = (std::pow(hi, n) - std::pow(lo, n)) / n;
  }
}

}  // namespace blowup::numerics
