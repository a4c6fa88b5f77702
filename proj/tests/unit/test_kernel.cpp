#include <doctest.h>

#include <cmath>
#include <random>

#include "blowup/error.hpp"
#include "blowup/kernel/bubble.hpp"
#include "blowup/kernel/spectral.hpp"
#include "oracles.hpp"

using namespace blowup;
using namespace blowup::kernel;

namespace {

Point random_point(std::mt19937_64& rng, int n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Point x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

double radial_l2_inner(const std::function<double(double)>& f, const std::function<double(double)>& g, int n,
                       double r_max) {
  std::vector<double> br{0.0};
  for (double r = 0.25; r < r_max; r *= 1.5) br.push_back(r);
  br.push_back(r_max);
  return oracle::sphere_area(n) *
         oracle::romberg_pieces([&](double r) { return f(r) * g(r) * std::pow(r, n - 1); }, br, 1e-12);
}

}  // namespace

TEST_CASE("bubble value at its center") {
  const Dimension d = Dimension::of(7);
  BubbleParams p = BubbleParams::centered(7, 1.0);
  CHECK(bubble_value(p.xi, p, d) == doctest::Approx(1.0));
  p.lambda = 0.5;
  CHECK(bubble_value(p.xi, p, d) == doctest::Approx(5.656854249).epsilon(1e-9));
  p.lambda = 0.0;
  CHECK_THROWS_AS(bubble_value(p.xi, p, d), DomainError);
}

TEST_CASE("bubble scaling identity at random points") {
  const Dimension d = Dimension::of(7);
  std::mt19937_64 rng(3);
  const double lam = 0.37;
  for (int k = 0; k < 20; ++k) {
    Point x = random_point(rng, 7, 2.0), lx = x;
    for (auto& v : lx) v *= lam;
    CHECK(bubble_value(lx, BubbleParams::centered(7, lam), d) ==
          doctest::Approx(std::pow(lam, -2.5) * bubble_value(x, BubbleParams::centered(7, 1.0), d)).epsilon(1e-13));
  }
}

TEST_CASE("bubble gradient: zero at the center, finite differences elsewhere, far-field decay") {
  const Dimension d = Dimension::of(7);
  BubbleParams p{{0.2, -0.1, 0, 0, 0.3, 0, 0}, 0.8, 0.0};
  for (double g : bubble_gradient(p.xi, p, d)) CHECK(g == 0.0);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const Point x = random_point(rng, 7, 1.5);
    const auto grad = bubble_gradient(x, p, d);
    for (int i = 0; i < 7; ++i) {
      const auto f = [&](double t) {
        Point y = x;
        y[i] = t;
        return bubble_value(y, p, d);
      };
      CHECK(grad[i] == doctest::Approx(oracle::derivative(f, x[i], 1e-3)).epsilon(1e-8));
    }
  }
  // |grad W| r^{n-1} tends to (n-2) (n(n-2))^{(n-2)/2}
  const BubbleParams unit = BubbleParams::centered(7, 1.0);
  const Point far{1e3, 0, 0, 0, 0, 0, 0};
  const double g = std::abs(bubble_gradient(far, unit, d)[0]) * std::pow(1e3, 6);
  CHECK(g == doctest::Approx(5.0 * std::pow(35.0, 2.5)).epsilon(1e-3));
}

TEST_CASE("bubble solves the stationary equation at random points") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lam(0.05, 5.0);
  for (int n : {3, 7, 9}) {
    const Dimension d = Dimension::of(n);
    for (int k = 0; k < 100; ++k) {
      BubbleParams p{random_point(rng, n, 1.0), lam(rng), 0.0};
      const Point x = random_point(rng, n, 3.0);
      const double w = bubble_value(x, p, d);
      const double res = -bubble_laplacian(x, p, d) - std::pow(w, d.p);
      CHECK(std::abs(res) <= 1e-10 * std::max(1.0, std::pow(w, d.p)));
    }
  }
}

TEST_CASE("zero modes at the origin and their decay") {
  const Dimension d = Dimension::of(7);
  const Point o(7, 0.0);
  CHECK(kernel_Z(8, o, d) == doctest::Approx(2.5));
  for (int i = 1; i <= 7; ++i) CHECK(kernel_Z(i, o, d) == 0.0);
  CHECK_THROWS_AS(kernel_Z(0, o, d), RangeError);
  CHECK_THROWS_AS(kernel_Z(9, o, d), RangeError);
  double lo1 = 1e300, hi1 = 0, lo8 = 1e300, hi8 = 0;
  for (double r = 1e2; r <= 1e4; r *= 1.3) {
    Point y(7, 0.0);
    y[0] = r;
    const double a = std::abs(kernel_Z(1, y, d)) * std::pow(r, 6);
    const double b = std::abs(kernel_Z(8, y, d)) * std::pow(r, 5);
    lo1 = std::min(lo1, a), hi1 = std::max(hi1, a), lo8 = std::min(lo8, b), hi8 = std::max(hi8, b);
  }
  CHECK(hi1 / lo1 < 1.05);
  CHECK(hi8 / lo8 < 1.05);
}

TEST_CASE("scaled kernels") {
  const Dimension d = Dimension::of(7);
  const auto& sp = cached_ground_state(d);
  const Point o(7, 0.0);
  CHECK(scaled_kernel(0, o, BubbleParams::centered(7, 1.0), d, &sp) == doctest::Approx(sp.z0(0.0)).epsilon(1e-14));
  BubbleParams p{{0.1, 0.2, 0, 0, 0, 0, -0.3}, 0.6, 0.0};
  CHECK(scaled_kernel(0, p.xi, p, d, &sp) == doctest::Approx(std::pow(0.6, -3.5) * sp.z0(0.0)).epsilon(1e-13));
  CHECK_THROWS(scaled_kernel(0, o, p, d, nullptr));
  // the L2 norm of Z_{n+1,0,lambda} does not depend on lambda
  std::vector<double> norms;
  for (double lam : {0.5, 1.0, 2.0}) {
    const auto z = [&](double r) {
      Point x(7, 0.0);
      x[0] = r;
      return scaled_kernel(8, x, BubbleParams::centered(7, lam), d);
    };
    norms.push_back(radial_l2_inner(z, z, 7, 4000.0 * lam));
  }
  CHECK(norms[1] == doctest::Approx(norms[0]).epsilon(1e-6));
  CHECK(norms[2] == doctest::Approx(norms[0]).epsilon(1e-6));
}

TEST_CASE("bubble energy: two independent integrals and scale invariance") {
  for (int n : {7, 9}) {
    const Dimension d = Dimension::of(n);
    const double lam = bubble_energy(d);
    CHECK(bubble_potential_energy(d) == doctest::Approx(lam).epsilon(1e-6));
    oracle::Bubble w{n};
    const auto grad2 = [&](double r) { return w.dr(r) * w.dr(r); };
    const auto one = [](double) { return 1.0; };
    CHECK(radial_l2_inner(grad2, one, n, 1e5) == doctest::Approx(lam).epsilon(1e-6));
    oracle::Bubble ws{n, 0.37};
    const auto grad2s = [&](double r) { return ws.dr(r) * ws.dr(r); };
    CHECK(radial_l2_inner(grad2s, one, n, 1e5) == doctest::Approx(lam).epsilon(1e-6));
  }
}

TEST_CASE("negative eigenvalue: shooting against the matrix route") {
  for (int n : {7, 8}) {
    const Dimension d = Dimension::of(n);
    const double shoot = shoot_negative_eigenvalue(d, 40.0, 1e-13);
    const double matrix = matrix_negative_eigenvalue(d, 40.0, 2000);
    CHECK(matrix == doctest::Approx(shoot).epsilon(1e-6));
    const auto spec = radial_operator_spectrum(d, 40.0, 1500);
    CHECK(spec.negative_count == 1);
    CHECK(spec.lowest.size() >= 2);
  }
}

TEST_CASE("ground state: normalization, sign, orthogonality and rayleigh quotient") {
  const Dimension d = Dimension::of(7);
  const auto& sp = cached_ground_state(d);
  CHECK(sp.mu0() > 0.0);
  CHECK(sp.z0(0.0) > 0.0);
  CHECK(sp.l2_norm() == doctest::Approx(1.0).epsilon(1e-8));
  const auto z0 = [&](double r) { return sp.z0(r); };
  CHECK(radial_l2_inner(z0, z0, 7, 200.0) == doctest::Approx(1.0).epsilon(1e-7));
  const auto z8 = [&](double r) { return UnitBubble::dilation_mode(r, d); };
  const double n8 = std::sqrt(radial_l2_inner(z8, z8, 7, 1e5));
  CHECK(std::abs(radial_l2_inner(z0, z8, 7, 200.0)) / n8 < 1e-6);
  // positive and decreasing past the core
  for (double r = 1.0; r < 60.0; r += 1.0) {
    CHECK(sp.z0(r) > 0.0);
    CHECK(sp.z0(r + 1.0) < sp.z0(r));
  }

  // Rayleigh quotient of the sampled profile, Richardson over two meshes
  const auto quotient = [&](int nodes) {
    std::vector<double> r(nodes + 1), v(nodes + 1);
    for (int i = 0; i <= nodes; ++i) {
      r[i] = 40.0 * i / nodes;
      v[i] = sp.z0(r[i]);
    }
    const auto lv = radial_operator_apply(d, r, v);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < nodes; ++i) {
      const double w = std::pow(std::max(r[i], 1e-300), 6) * (i == 0 ? 0.5 : 1.0);
      num += w * v[i] * lv[i];
      den += w * v[i] * v[i];
    }
    return num / den;
  };
  const double q1 = quotient(4000), q2 = quotient(8000);
  CHECK((4 * q2 - q1) / 3 == doctest::Approx(-sp.mu0()).epsilon(1e-6));
}

TEST_CASE("operator applied to the dilation mode converges at second order") {
  const Dimension d = Dimension::of(7);
  std::vector<double> res;
  for (int nodes : {500, 1000, 2000}) {
    std::vector<double> r(nodes + 1), v(nodes + 1);
    for (int i = 0; i <= nodes; ++i) {
      r[i] = 20.0 * i / nodes;
      v[i] = UnitBubble::dilation_mode(r[i], d);
    }
    const auto lv = radial_operator_apply(d, r, v);
    double m = 0.0;
    for (double x : lv) m = std::max(m, std::abs(x));
    res.push_back(m);
  }
  CHECK(res[0] / res[1] == doctest::Approx(4.0).epsilon(0.1));
  CHECK(res[1] / res[2] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("spectral data json round trip") {
  const auto& sp = cached_ground_state(Dimension::of(7));
  const SpectralData back = SpectralData::from_json(sp.to_json());
  CHECK(back.mu0() == sp.mu0());
  for (double r : {0.0, 0.7, 3.0, 25.0, 60.0}) CHECK(back.z0(r) == doctest::Approx(sp.z0(r)).epsilon(1e-14));
  CHECK_THROWS_AS(SpectralData::from_json({{"n", 7}}), ConfigError);
}
