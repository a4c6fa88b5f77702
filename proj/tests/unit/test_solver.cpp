#include <doctest.h>

#include <cmath>

#include "blowup/error.hpp"
#include "blowup/kernel/bubble.hpp"
#include "blowup/solver/integrator.hpp"
#include "oracles.hpp"

using namespace blowup;
using namespace blowup::solver;

namespace {

const Dimension d7 = Dimension::of(7);

RadialField bubble_field(const GridPtr& g, double A, double lambda = 1.0) {
  std::vector<double> v(g->size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = A * std::pow(lambda, -d7.alpha) * kernel::UnitBubble::value((*g)[i] / lambda, d7);
  return RadialField(g, v);
}

RadialField constant_field(const GridPtr& g, double c) { return RadialField(g, std::vector<double>(g->size(), c)); }

SolverConfig reaction_config() {
  SolverConfig c;
  c.mode = Mode::reaction_only;
  c.scheme = Scheme::explicit_rk;
  c.rtol = 1e-11;
  c.u_max = 1e12;
  return c;
}

GridPtr coarse_grid(double R = 20.0) { return RadialGrid::graded(d7, R, 1.05, 1e-4, 0.05); }

}  // namespace

TEST_CASE("grid construction and validation") {
  const auto u = RadialGrid::uniform(d7, 2.0, 16);
  CHECK(u->size() == 17);
  CHECK((*u)[16] == doctest::Approx(2.0));
  const auto g = RadialGrid::graded(d7, 20.0, 1.02, 1e-5, 0.01);
  CHECK(g->radius() == doctest::Approx(20.0));
  CHECK(g->size() > 2000);
  CHECK_THROWS_AS(RadialGrid::uniform(d7, 1.0, 8), DomainError);
  CHECK_THROWS_AS(RadialGrid(d7, {0.0, 0.5, 0.4}, SpacingPolicy::uniform), DomainError);
  CHECK_THROWS_AS(spacing_policy_from_string("cubic"), ConfigError);
  CHECK(spacing_policy_from_string(to_string(SpacingPolicy::graded)) == SpacingPolicy::graded);
  // shell volumes add up to the ball
  const std::vector<double> one(g->size(), 1.0);
  CHECK(g->integrate(one) == doctest::Approx(d7.ball_volume() * std::pow(20.0, 7)).epsilon(1e-12));
}

TEST_CASE("discrete laplacian: quadratics exact, constants zero") {
  const auto g = RadialGrid::graded(d7, 3.0, 1.1, 1e-3, 0.1);
  std::vector<double> q(g->size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = (*g)[i] * (*g)[i];
  const auto lq = discrete_laplacian(*g, q);
  for (double v : lq) CHECK(v == doctest::Approx(14.0).epsilon(1e-9));
  const auto lc = discrete_laplacian(constant_field(g, 2.5));
  for (double v : lc.values) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("discrete laplacian of the bubble converges to -W^p at second order") {
  std::vector<double> errs;
  for (int cells : {200, 400, 800}) {
    const auto g = RadialGrid::uniform(d7, 10.0, cells);
    const auto lw = discrete_laplacian(bubble_field(g, 1.0));
    double e = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double w = kernel::UnitBubble::value((*g)[i], d7);
      e = std::max(e, std::abs(lw.values[i] + std::pow(w, d7.p)));
    }
    errs.push_back(e);
  }
  CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.15));
  CHECK(errs[1] / errs[2] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("step of size zero is the identity") {
  const auto g = coarse_grid();
  const auto u = bubble_field(g, 1.1);
  for (Scheme s : {Scheme::imex, Scheme::explicit_rk}) {
    SolverConfig c;
    c.scheme = s;
    const auto r = step(u, 0.0, c);
    CHECK(r.field.values == u.values);
    CHECK(r.field.time == u.time);
  }
}

TEST_CASE("reaction-only run follows the exact ODE solution") {
  const auto g = RadialGrid::uniform(d7, 1.0, 16);
  const double s0 = 0.8;
  const double beta = d7.type1_exponent();
  const auto traj = run_until_blowup(constant_field(g, d7.kappa * std::pow(s0, -beta)), reaction_config());
  CHECK(traj.termination == Termination::blowup);
  double worst = 0.0;
  for (const auto& f : traj.snapshots) {
    if (s0 - f.time < 0.5 * s0 * 0.5) break;  // until T - t has halved twice
    const double exact = d7.kappa * std::pow(s0 - f.time, -beta);
    worst = std::max(worst, std::abs(f.values[3] / exact - 1.0));
  }
  CHECK(worst < 1e-6);

  // blowup time of u' = u^p from u(0) = A
  for (double A : {1.0, 2.0}) {
    auto t = run_until_blowup(constant_field(g, A), reaction_config());
    const auto est = estimate_blowup_time(t);
    CHECK(est.T == doctest::Approx(std::pow(A, -(d7.p - 1)) / (d7.p - 1)).epsilon(1e-4));
    CHECK(est.exponent == doctest::Approx(beta).epsilon(1e-3));
    CHECK(est.kappa_fit == doctest::Approx(d7.kappa).epsilon(1e-3));
    CHECK(est.decades >= 3.0);
  }
}

TEST_CASE("stationary bubble persists under the full equation") {
  const auto g = RadialGrid::graded(d7, 40.0, 1.02, 1e-4, 0.01);
  const auto w = bubble_field(g, 1.0);
  SolverConfig c;
  c.t_max = 1.0;
  c.rtol = 1e-8;
  const auto traj = run_until_blowup(w, c);
  CHECK(traj.termination == Termination::time_limit);
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < g->size(); ++i)
    worst = std::max(worst, std::abs(traj.snapshots.back().values[i] - w.values[i]));
  CHECK(worst < 1e-3);
}

TEST_CASE("subcritical data dissipate, supercritical data blow up") {
  const auto g = coarse_grid();
  SolverConfig c;
  c.t_max = 50.0;
  const auto low = run_until_blowup(bubble_field(g, 0.5), c);
  CHECK(low.termination == Termination::time_limit);
  CHECK(low.snapshots.back().sup() < 0.05 * low.snapshots.front().sup());
  for (std::size_t k = 1; k < low.sup_history.size(); ++k)
    CHECK(low.sup_history[k].sup <= low.sup_history[k - 1].sup * (1 + 1e-12));
  CHECK_THROWS_AS(estimate_blowup_time(low), FitQualityError);

  const auto high = run_until_blowup(bubble_field(g, 1.2), SolverConfig{});
  CHECK(high.termination == Termination::blowup);
  CHECK(high.snapshots.back().sup() >= 1e8);
  // positivity and a non-decreasing budget
  double min_u = 0.0;
  for (const auto& f : high.snapshots)
    for (double v : f.values) min_u = std::min(min_u, v);
  CHECK(min_u >= -1e-10);
  for (std::size_t k = 1; k < high.budget.cumulative.size(); ++k)
    CHECK(high.budget.cumulative[k] >= high.budget.cumulative[k - 1]);
  const auto est = estimate_blowup_time(high);
  CHECK(est.exponent == doctest::Approx(1.25).epsilon(0.05));
}

TEST_CASE("scaling covariance of the blowup time") {
  const double lam = 0.5;
  const auto g1 = coarse_grid(20.0);
  const auto g2 = RadialGrid::graded(d7, 20.0 * lam, 1.05, 1e-4 * lam, 0.05 * lam);
  SolverConfig c;
  c.rtol = 1e-8;
  const auto t1 = run_until_blowup(bubble_field(g1, 1.2), c);
  c.u_max *= std::pow(lam, -d7.alpha);
  const auto t2 = run_until_blowup(bubble_field(g2, 1.2, lam), c);
  const double T1 = estimate_blowup_time(t1).T;
  const double T2 = estimate_blowup_time(t2).T;
  CHECK(T2 == doctest::Approx(lam * lam * T1).epsilon(1e-3));
}

TEST_CASE("sup norm converges at second order in the mesh width") {
  std::vector<double> sup;
  for (int cells : {100, 200, 400}) {
    const auto g = RadialGrid::uniform(d7, 10.0, cells);
    SolverConfig c;
    c.t_max = 0.5;
    c.rtol = 1e-10;
    const auto traj = run_until_blowup(bubble_field(g, 0.8), c);
    sup.push_back(traj.snapshots.back().values[0]);
  }
  const double ratio = (sup[0] - sup[1]) / (sup[1] - sup[2]);
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("energy identity") {
  SUBCASE("stationary bubble") {
    const auto g = RadialGrid::graded(d7, 40.0, 1.02, 1e-4, 0.01);
    SolverConfig c;
    c.t_max = 0.5;
    c.rtol = 1e-8;
    const auto traj = run_until_blowup(bubble_field(g, 1.0), c);
    // the discrete bubble drifts slowly along the unstable mode
    const double scale = kernel::bubble_energy(d7);
    for (const auto& s : energy_identity_residual(traj, RadialCutoff{5.0})) {
      CHECK(std::abs(s.lhs) < 1e-3 * scale);
      CHECK(std::abs(s.rhs) < 1e-3 * scale);
      CHECK(std::abs(s.residual) < 1e-5 * scale);
    }
  }
  SUBCASE("spatially constant reaction run") {
    // exact for the ODE; the discrete check is second order in the snapshot spacing
    const auto g = RadialGrid::uniform(d7, 1.0, 16);
    std::vector<double> worst;
    for (double stride : {0.05, 0.005}) {
      auto c = reaction_config();
      c.snapshot_log_stride = stride;
      const auto samples = energy_identity_residual(run_until_blowup(constant_field(g, 1.0), c));
      REQUIRE(samples.size() > 10);
      double w = 0.0;
      for (const auto& s : samples) w = std::max(w, std::abs(s.residual / s.rhs));
      worst.push_back(w);
    }
    CHECK(worst[0] < 1e-2);
    CHECK(worst[1] < 1e-3);
    CHECK(worst[1] < worst[0] / 10.0);
  }
  SUBCASE("residual shrinks under refinement") {
    std::vector<double> worst;
    for (double rtol : {1e-5, 1e-7}) {
      const auto g = coarse_grid();
      SolverConfig c;
      c.rtol = rtol;
      c.u_max = 1e3;
      const auto traj = run_until_blowup(bubble_field(g, 1.2), c);
      double w = 0.0;
      for (const auto& s : energy_identity_residual(traj, RadialCutoff{2.0}))
        w = std::max(w, std::abs(s.residual) / std::max(1.0, std::abs(s.rhs)));
      worst.push_back(w);
    }
    CHECK(worst[1] < worst[0]);
  }
}

TEST_CASE("synthetic trajectories") {
  const auto g = RadialGrid::uniform(d7, 1.0, 16);
  std::vector<RadialField> fields{constant_field(g, 1.0), constant_field(g, 3.0)};
  fields[1].time = 2.0;
  const auto traj = Trajectory::from_snapshots(g, fields);
  CHECK(traj.values_at(0.5)[4] == doctest::Approx(1.5));
  CHECK(traj.dudt_at(1.0)[2] == doctest::Approx(1.0));
  CHECK_THROWS_AS(traj.values_at(2.5), RangeError);
  fields[1].time = 0.0;
  CHECK_THROWS_AS(Trajectory::from_snapshots(g, fields), DomainError);
}
