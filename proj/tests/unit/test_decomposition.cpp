#include <doctest.h>

#include <cmath>
#include <random>

#include "blowup/decomposition/bubble_tree.hpp"
#include "blowup/decomposition/fit.hpp"
#include "blowup/decomposition/sampler.hpp"
#include "blowup/decomposition/track.hpp"
#include "blowup/error.hpp"
#include "blowup/kernel/bubble.hpp"
#include "oracles.hpp"

using namespace blowup;
using namespace blowup::decomposition;
using kernel::BubbleParams;

namespace {

const Dimension d7 = Dimension::of(7);
const kernel::SpectralData& spectral() { return kernel::cached_ground_state(d7); }

std::shared_ptr<BubbleSum> bubble(const BubbleParams& p) {
  auto s = std::make_shared<BubbleSum>(d7, &spectral());
  s->add(p);
  return s;
}

// delta (1 + x_1) exp(-|x - c|^2 / rho^2)
std::shared_ptr<AnalyticSampler> bump(double delta, Point c, double rho) {
  return std::make_shared<AnalyticSampler>(d7, [=](std::span<const double> x, std::span<double> g) {
    double q = 0.0;
    for (int i = 0; i < 7; ++i) q += (x[i] - c[i]) * (x[i] - c[i]);
    const double b = std::exp(-q / (rho * rho));
    for (int i = 0; i < 7; ++i) g[i] = -2.0 * delta * (1 + x[0]) * b * (x[i] - c[i]) / (rho * rho);
    g[0] += delta * b;
    return delta * (1 + x[0]) * b;
  });
}

double param_error(const BubbleParams& a, const BubbleParams& b) {
  double e = std::max(std::abs(a.lambda - b.lambda), std::abs(a.a - b.a));
  for (std::size_t i = 0; i < a.xi.size(); ++i) e = std::max(e, std::abs(a.xi[i] - b.xi[i]));
  return e;
}

solver::RadialField bubble_field(const solver::GridPtr& g, double lam) {
  std::vector<double> v(g->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(lam, -d7.alpha) * kernel::UnitBubble::value((*g)[i] / lam, d7);
  return solver::RadialField(g, v);
}

}  // namespace

TEST_CASE("samplers agree with closed forms and finite differences") {
  const BubbleParams p{{0.3, -0.2, 0, 0.1, 0, 0, 0}, 0.7, 0.02};
  const auto u = bubble(p);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    Point x(7);
    for (auto& v : x) v = U(rng);
    std::vector<double> g(7);
    const double val = u->evaluate(x, g);
    const double z = p.a * std::pow(p.lambda, -3.5) * spectral().z0(distance(x, p.xi) / p.lambda);
    CHECK(val == doctest::Approx(kernel::bubble_value(x, p, d7) + z).epsilon(1e-12));
    for (int i = 0; i < 7; ++i) {
      const auto f = [&](double t) {
        Point y = x;
        y[i] = t;
        return u->value(y);
      };
      CHECK(g[i] == doctest::Approx(oracle::derivative(f, x[i], 1e-4)).epsilon(1e-6));
    }
  }
  CHECK_FALSE(u->radial());
  CHECK(to_string(u->provenance()) == "synthetic");

  const auto grid = solver::RadialGrid::graded(d7, 20.0, 1.02, 1e-4, 0.01);
  const RadialFieldSampler rs(bubble_field(grid, 0.6));
  CHECK(rs.radial());
  CHECK(to_string(rs.provenance()) == "pde_snapshot");
  Point x{0.2, 0.1, 0, 0, 0, 0, 0.3};
  CHECK(rs.value(x) == doctest::Approx(kernel::bubble_value(x, BubbleParams::centered(7, 0.6), d7)).epsilon(1e-7));
  x[0] = 25.0;
  CHECK(rs.value(x) == 0.0);

  // mu^{-alpha} u((x - v)/mu) of a bubble is the moved, rescaled bubble
  const Point v{1, 2, 0, 0, 0, 0, -1};
  const TransformedSampler t(bubble(BubbleParams::centered(7, 0.5)), v, 2.0);
  const Point y{1.3, 2.1, 0, 0.2, 0, 0, -1};
  CHECK(t.value(y) == doctest::Approx(kernel::bubble_value(y, BubbleParams{v, 1.0, 0.0}, d7)).epsilon(1e-13));

  const SumSampler mixed(std::make_shared<RadialFieldSampler>(bubble_field(grid, 0.6)), bubble(p));
  CHECK(mixed.provenance() == Provenance::synthetic);
}

TEST_CASE("fit at the exact root") {
  const BubbleParams truth{{0.3, 0, -0.1, 0, 0, 0.2, 0}, 0.8, 0.0};
  const auto u = bubble(truth);
  const auto r = fit_orthogonal(*u, truth, spectral());
  CHECK(r.converged);
  CHECK(r.iterations <= 1);
  CHECK(r.max_residual() < 1e-12);
  CHECK(param_error(r.params, truth) < 1e-12);
}

TEST_CASE("fit recovers a bubble with a negative-mode component") {
  const BubbleParams truth{{0.3, 0, 0, 0, 0, 0, 0}, 0.7, 0.01 * 0.7};
  const auto u = bubble(truth);
  auto r = fit_orthogonal(*u, max_point_guess(*u, Point(7, 0.0)), spectral());
  REQUIRE(r.converged);
  CHECK(std::abs(r.params.lambda - truth.lambda) < 1e-8);
  CHECK(std::abs(r.params.a - truth.a) < 1e-8);
  CHECK(std::abs(r.params.xi[0] - 0.3) < 1e-8);
  CHECK(certify(*u, r, spectral()));
  CHECK(r.certificate <= 10 * FitOptions{}.tol_orth);
  // a second guess elsewhere in the basin lands on the same parameters
  BubbleParams other = truth;
  other.lambda = 0.68;
  other.a = 0.005;
  other.xi = {0.31, 0.01, 0, 0, -0.01, 0, 0};
  const auto r2 = fit_orthogonal(*u, other, spectral());
  INFO(r2.failure);
  REQUIRE(r2.converged);
  CHECK(param_error(r.params, r2.params) < 1e-9);
}

TEST_CASE("fit of a perturbed bubble") {
  const double delta = 1e-3;
  const auto u = std::make_shared<SumSampler>(bubble(BubbleParams::centered(7, 1.0)),
                                              bump(delta, {0.5, 0.2, 0, 0, 0, 0, 0}, 1.5));
  auto r = fit_orthogonal(*u, BubbleParams::centered(7, 1.0), spectral());
  REQUIRE(r.converged);
  CHECK(r.max_residual() <= FitOptions{}.tol_orth);
  CHECK(param_error(r.params, BubbleParams::centered(7, 1.0)) < 10 * delta);
  CHECK(param_error(r.params, BubbleParams::centered(7, 1.0)) > 0.0);
  // a finer angular rule sees only the quadrature error of the default one
  FitOptions fine;
  fine.sphere_order = 5;
  for (double v : orthogonality_residuals(*u, r.params, spectral(), fine, true)) CHECK(std::abs(v) < 1e-2 * delta);
  CHECK(certify(*u, r, spectral()));
}

TEST_CASE("fit is equivariant under translation and rescaling") {
  const auto base = std::make_shared<SumSampler>(bubble(BubbleParams{{0.1, 0, 0, 0, 0, 0, 0}, 0.9, 0.004}),
                                                 bump(1e-3, {0.4, 0, 0.3, 0, 0, 0, 0}, 1.2));
  const auto r0 = fit_orthogonal(*base, max_point_guess(*base, Point(7, 0.0)), spectral());
  REQUIRE(r0.converged);
  const Point v{0.5, -0.25, 0, 0, 0.1, 0, 0};
  const double mu = 0.6;
  const TransformedSampler moved(base, v, mu);
  const auto r1 = fit_orthogonal(moved, max_point_guess(moved, v), spectral());
  REQUIRE(r1.converged);
  CHECK(r1.params.lambda == doctest::Approx(mu * r0.params.lambda).epsilon(1e-8));
  CHECK(r1.params.a == doctest::Approx(mu * r0.params.a).epsilon(1e-6));
  for (int i = 0; i < 7; ++i) CHECK(std::abs(r1.params.xi[i] - (mu * r0.params.xi[i] + v[i])) < 1e-8);
}

TEST_CASE("radial fit of a sampled bubble") {
  const auto grid = solver::RadialGrid::graded(d7, 20.0, 1.02, 1e-5, 0.01);
  const RadialFieldSampler u(bubble_field(grid, 0.4));
  auto r = fit_orthogonal_radial(u, 0.39, 0.0, spectral());
  INFO(r.failure);
  REQUIRE(r.converged);
  CHECK(r.radial);
  CHECK(r.params.lambda == doctest::Approx(0.4).epsilon(1e-7));
  CHECK(std::abs(r.params.a) < 1e-7);
  CHECK(certify(u, r, spectral()));
  CHECK_THROWS_AS(fit_orthogonal_radial(*bubble({{0.2, 0, 0, 0, 0, 0, 0}, 1.0, 0.0}), 1.0, 0.0, spectral()),
                  DomainError);
}

TEST_CASE("fit reports failure on a field without a bubble") {
  const AnalyticSampler zero(d7, [](std::span<const double>, std::span<double> g) {
    std::fill(g.begin(), g.end(), 0.0);
    return 0.0;
  });
  const auto r = fit_orthogonal(zero, BubbleParams::centered(7, 1.0), spectral());
  CHECK_FALSE(r.converged);
  CHECK_FALSE(r.failure.empty());
}

TEST_CASE("ascent finds the maximum") {
  const auto u = bubble(BubbleParams{{0.2, -0.4, 0, 0, 0, 0.1, 0}, 0.3, 0.0});
  const Point m = ascend_to_max(*u, Point(7, 0.0));
  CHECK(distance(m, Point{0.2, -0.4, 0, 0, 0, 0.1, 0}) < 1e-6);
  const auto g = max_point_guess(*u, Point(7, 0.0));
  CHECK(g.lambda == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(g.a == 0.0);
}

TEST_CASE("centered derivative is exact on quadratics") {
  const std::vector<double> t{0.0, 0.1, 0.35, 0.4, 0.9};
  std::vector<double> v;
  for (double x : t) v.push_back(2 - x + 3 * x * x);
  for (std::size_t k = 1; k + 1 < t.size(); ++k) CHECK(centered_derivative(t, v, k) == doctest::Approx(-1 + 6 * t[k]));
  CHECK_THROWS_AS(centered_derivative({1.0}, {1.0}, 0), DomainError);
}

TEST_CASE("track of a frozen bubble") {
  const auto grid = solver::RadialGrid::graded(d7, 20.0, 1.02, 1e-5, 0.01);
  std::vector<solver::RadialField> fields;
  for (int k = 0; k < 6; ++k) {
    auto f = bubble_field(grid, 0.3);
    f.time = 0.1 * k;
    fields.push_back(f);
  }
  const auto traj = solver::Trajectory::from_snapshots(grid, fields);
  const auto track = track_parameters(traj, spectral());
  CHECK(track.valid_count() == 6);
  for (const auto& p : track.points) {
    CHECK(p.lambda() == doctest::Approx(0.3).epsilon(1e-8));
    CHECK(std::abs(p.a()) < 1e-8);
    CHECK(std::abs(p.dlambda_dt) < 1e-7);
    CHECK(std::abs(p.da_dt) < 1e-7);
  }
  CHECK(track.violation_log.empty());
}

TEST_CASE("track of a prescribed scale recovers its derivative") {
  const auto grid = solver::RadialGrid::graded(d7, 20.0, 1.02, 1e-5, 0.01);
  const double lam0 = 0.3;
  std::vector<solver::RadialField> fields;
  for (int k = 0; k <= 40; ++k) {
    const double t = 0.05 * k;
    auto f = bubble_field(grid, lam0 * (1 + 0.1 * std::sin(t)));
    f.time = t;
    fields.push_back(f);
  }
  const auto track = track_parameters(solver::Trajectory::from_snapshots(grid, fields), spectral());
  REQUIRE(track.valid_count() == fields.size());
  for (std::size_t k = 1; k + 1 < track.points.size(); ++k) {
    const double t = track.points[k].t;
    CHECK(std::abs(track.points[k].dlambda_dt - 0.1 * lam0 * std::cos(t)) < 1e-3 * 0.1 * lam0);
  }
  // ratio and its calibration
  CHECK(track.c_red == doctest::Approx(2.0 * [&] {
          double m = 0.0;
          for (std::size_t k = 0; k < 21; ++k) m = std::max(m, track.points[k].ratio);
          return m;
        }()));
}

TEST_CASE("bubble tree of well-separated bubbles") {
  SUBCASE("one bubble") {
    const auto u = bubble(BubbleParams::centered(7, 0.01));
    const auto tree = bubble_tree(*u, {Point(7, 0.0), 2.0});
    REQUIRE(tree.size() == 1);
    CHECK(norm(tree.entries[0].xi) < 1e-8);
    CHECK(tree.entries[0].lambda == doctest::Approx(0.01).epsilon(1e-6));
    const auto e = quantized_energy(*u, tree, 100.0);
    CHECK(e[0] == doctest::Approx(kernel::bubble_energy(d7)).epsilon(0.01));
  }
  SUBCASE("two bubbles at distance one") {
    BubbleSum u(d7);
    u.add({Point(7, 0.0), 0.01, 0.0});
    u.add({{1, 0, 0, 0, 0, 0, 0}, 0.02, 0.0});
    const auto tree = bubble_tree(u, {Point(7, 0.0), 2.0});
    REQUIRE(tree.size() == 2);
    CHECK(tree.min_separation() == doctest::Approx(50.0).epsilon(0.01));
    for (const auto& e : tree.entries) {
      const bool first = norm(e.xi) < 0.5;
      const Point truth = first ? Point(7, 0.0) : Point{1, 0, 0, 0, 0, 0, 0};
      CHECK(distance(e.xi, truth) < 0.05 * (first ? 0.01 : 0.02));
    }
    const auto json = tree.to_json();
    CHECK(json["bubbles"].size() == 2);
  }
  SUBCASE("bounded field gives an empty tree") {
    const AnalyticSampler c(d7, [](std::span<const double>, std::span<double> g) {
      std::fill(g.begin(), g.end(), 0.0);
      return 0.1;
    });
    TreeOptions o;
    o.C2 = 1.0;
    CHECK(bubble_tree(c, {Point(7, 0.0), 100.0}, o).size() == 0);
  }
}

TEST_CASE("quantized energy edge cases") {
  const AnalyticSampler zero(d7, [](std::span<const double>, std::span<double> g) {
    std::fill(g.begin(), g.end(), 0.0);
    return 0.0;
  });
  BubbleTree tree;
  tree.entries.push_back({Point(7, 0.0), 0.01, 0.0});
  tree.separation = {{0.0}};
  CHECK(quantized_energy(zero, tree, 100.0)[0] == 0.0);
  tree.entries.push_back({{0.5, 0, 0, 0, 0, 0, 0}, 0.01, 0.0});
  tree.separation = {{0.0, 50.0}, {50.0, 0.0}};
  CHECK_THROWS_AS(quantized_energy(zero, tree, 100.0), DomainError);
}
