#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "blowup/decomposition/sampler.hpp"

namespace blowup::decomposition {

/// Closed ball on which the tree search runs.
struct Domain {
  Point center;
  double radius = 1.0;
};

struct TreeOptions {
  double C2 = 100.0;
  int max_bubbles = 16;
  int seeds = 2000;
  std::uint64_t seed = 1;
};

struct TreeEntry {
  Point xi;
  double lambda = 0.0;      // u(xi)^{-2/(n-2)}
  double weighted = 0.0;    // the weighted function at discovery
};

struct BubbleTree {
  std::vector<TreeEntry> entries;  // in discovery order
  /// |xi_j - xi_k| / max(lambda_j, lambda_k); zero on the diagonal.
  std::vector<std::vector<double>> separation;
  /// Largest weighted value left when the search stopped.
  double residual_weighted = 0.0;
  bool truncated = false;  // hit max_bubbles
  std::string note;

  std::size_t size() const { return entries.size(); }
  /// Smallest off-diagonal separation ratio; infinity below two entries.
  double min_separation() const;
  nlohmann::json to_json() const;
};

/// Iterative maximization of min_k |x - xi_k|^{(n-2)/2} u(x) (u itself for
/// the first bubble) until the maximum drops to C2. Each recorded center is
/// the local maximum of u nearest the weighted maximizer.
BubbleTree bubble_tree(const FieldSampler& u, const Domain& domain, const TreeOptions& options = {});

/// int_{B_{R lambda_j}(xi_j)} |grad u|^2 for each tree entry. Throws
/// DomainError when two entries are closer than 4R in separation ratio.
std::vector<double> quantized_energy(const FieldSampler& u, const BubbleTree& tree, double R, int sphere_order = 4);

}  // namespace blowup::decomposition
