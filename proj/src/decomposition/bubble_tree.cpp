#include "blowup/decomposition/bubble_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "blowup/decomposition/fit.hpp"
#include "blowup/error.hpp"
#include "blowup/numerics/quadrature.hpp"

namespace blowup::decomposition {

double BubbleTree::min_separation() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < separation.size(); ++j)
    for (std::size_t k = 0; k < separation.size(); ++k)
      if (j != k) m = std::min(m, separation[j][k]);
  return m;
}

nlohmann::json BubbleTree::to_json() const {
  nlohmann::json j;
  j["bubbles"] = nlohmann::json::array();
  for (const auto& e : entries) j["bubbles"].push_back({{"xi", e.xi}, {"lambda", e.lambda}, {"weighted", e.weighted}});
  j["separation"] = separation;
  j["residual_weighted"] = residual_weighted;
  j["truncated"] = truncated;
  j["note"] = note;
  return j;
}

namespace {

double weight(const Point& x, const std::vector<TreeEntry>& entries, double alpha) {
  if (entries.empty()) return 1.0;
  double d = std::numeric_limits<double>::infinity();
  for (const auto& e : entries) d = std::min(d, distance(x, e.xi));
  return std::pow(d, alpha);
}

std::vector<Point> seed_points(const Domain& domain, int count, std::uint64_t seed) {
  const int n = domain.center.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> out{domain.center};
  Point v(n);
  for (int s = 0; s < count; ++s) {
    double len = 0.0;
    for (double& c : v) {
      c = gauss(rng);
      len += c * c;
    }
    len = std::sqrt(len);
    const double r = domain.radius * std::pow(unit(rng), 1.0 / n);
    Point x(n);
    for (int i = 0; i < n; ++i) x[i] = domain.center[i] + r * v[i] / len;
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

BubbleTree bubble_tree(const FieldSampler& u, const Domain& domain, const TreeOptions& options) {
  const Dimension& dim = u.dim();
  if (static_cast<int>(domain.center.size()) != dim.n) throw DomainError("domain center has the wrong dimension");
  if (!(domain.radius > 0.0)) throw DomainError("domain radius must be positive");

  const std::vector<Point> seeds = seed_points(domain, options.seeds, options.seed);
  std::vector<double> seed_values;
  for (const auto& s : seeds) seed_values.push_back(u.value(s));

  // Local maxima of u reached from the seeds, deduplicated.
  struct Peak {
    Point x;
    double value;
    bool used = false;
  };
  std::vector<Peak> peaks;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    if (!(seed_values[s] > 0.0)) continue;
    Point x = ascend_to_max(u, seeds[s]);
    if (distance(x, domain.center) > domain.radius) continue;
    const double v = u.value(x);
    const double scale = std::pow(v, -1.0 / dim.alpha);
    const bool known = std::any_of(peaks.begin(), peaks.end(), [&](const Peak& p) {
      return distance(p.x, x) <= 0.1 * std::min(scale, std::pow(p.value, -1.0 / dim.alpha));
    });
    if (!known) peaks.push_back({std::move(x), v});
  }

  BubbleTree tree;
  while (true) {
    double best = -std::numeric_limits<double>::infinity();
    int best_peak = -1;
    int best_seed = -1;
    for (std::size_t k = 0; k < peaks.size(); ++k) {
      if (peaks[k].used) continue;
      const double f = weight(peaks[k].x, tree.entries, dim.alpha) * peaks[k].value;
      if (f > best) {
        best = f;
        best_peak = k;
        best_seed = -1;
      }
    }
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      const double f = weight(seeds[s], tree.entries, dim.alpha) * seed_values[s];
      if (f > best) {
        best = f;
        best_seed = s;
        best_peak = -1;
      }
    }
    tree.residual_weighted = std::max(best, 0.0);
    if (!(best > options.C2)) break;
    if (static_cast<int>(tree.entries.size()) >= options.max_bubbles) {
      tree.truncated = true;
      tree.note = "more than " + std::to_string(options.max_bubbles) + " bubbles; tree is partial";
      break;
    }
    TreeEntry entry;
    entry.weighted = best;
    if (best_peak >= 0) {
      peaks[best_peak].used = true;
      entry.xi = peaks[best_peak].x;
    } else {
      entry.xi = seeds[best_seed];
      tree.note = "a weighted maximum away from every local maximum of u was recorded";
    }
    const double v = u.value(entry.xi);
    entry.lambda = std::pow(v, -1.0 / dim.alpha);
    tree.entries.push_back(std::move(entry));
    if (best_seed >= 0) seed_values[best_seed] = 0.0;
  }

  const std::size_t m = tree.entries.size();
  tree.separation.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k)
      if (j != k)
        tree.separation[j][k] = distance(tree.entries[j].xi, tree.entries[k].xi) /
                                std::max(tree.entries[j].lambda, tree.entries[k].lambda);
  return tree;
}

std::vector<double> quantized_energy(const FieldSampler& u, const BubbleTree& tree, double R, int sphere_order) {
  if (!(R > 0.0)) throw DomainError("energy radius multiple must be positive");
  const double ratio = tree.min_separation();
  if (tree.size() >= 2 && ratio < 4.0 * R) {
    std::ostringstream os;
    os << "bubbles overlap: minimum separation ratio " << ratio << " is below 4R = " << 4.0 * R;
    throw DomainError(os.str());
  }
  const Dimension& dim = u.dim();
  const int n = dim.n;
  const numerics::SphereRule sphere = numerics::sphere_rule(n, sphere_order);
  const auto& rule = numerics::cached_gauss_legendre(16);
  std::vector<double> cuts{0.0};
  for (double r = 0.25; r < R; r *= 2.0) cuts.push_back(r);
  cuts.push_back(R);

  std::vector<double> energies;
  Point x(n);
  std::vector<double> grad(n);
  for (const auto& e : tree.entries) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double half = 0.5 * (cuts[i + 1] - cuts[i]) * e.lambda;
      const double mid = 0.5 * (cuts[i + 1] + cuts[i]) * e.lambda;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double r = mid + half * rule.nodes[q];
        double shell = 0.0;
        for (std::size_t d = 0; d < sphere.size(); ++d) {
          const auto omega = sphere.direction(d);
          for (int c = 0; c < n; ++c) x[c] = e.xi[c] + r * omega[c];
          u.evaluate(x, grad);
          double g2 = 0.0;
          for (double g : grad) g2 += g * g;
          shell += sphere.weights[d] * g2;
        }
        total += half * rule.weights[q] * std::pow(r, n - 1) * shell;
      }
    }
    energies.push_back(total);
  }
  return energies;
}

}  // namespace blowup::decomposition
