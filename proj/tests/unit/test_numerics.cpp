#include <doctest.h>

#include <cmath>
#include <numbers>

#include "blowup/error.hpp"
#include "blowup/numerics/dopri5.hpp"
#include "blowup/numerics/quadrature.hpp"
#include "blowup/numerics/radial_stencil.hpp"
#include "blowup/numerics/spline.hpp"
#include "oracles.hpp"

using namespace blowup::numerics;

TEST_CASE("gauss-legendre integrates polynomials of degree 2m-1 exactly") {
  for (int m : {1, 3, 8, 16}) {
    const GaussRule rule = gauss_legendre(m);
    for (int d = 0; d <= 2 * m - 1; ++d) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += rule.weights[k] * std::pow(rule.nodes[k], d);
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("gegenbauer rule carries its weight") {
  const double gamma = 2.5;
  const GaussRule rule = gauss_gegenbauer(6, gamma);
  double s = 0.0, s2 = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    s += rule.weights[k];
    s2 += rule.weights[k] * rule.nodes[k] * rule.nodes[k];
  }
  const auto w = [&](double t) { return std::pow(1 - t * t, gamma); };
  CHECK(s == doctest::Approx(oracle::romberg(w, -1, 1, 1e-13)).epsilon(1e-10));
  CHECK(s2 == doctest::Approx(oracle::romberg([&](double t) { return t * t * w(t); }, -1, 1, 1e-13)).epsilon(1e-10));
  CHECK_THROWS_AS(gauss_gegenbauer(4, -1.0), blowup::DomainError);
}

TEST_CASE("composite and adaptive rules agree with romberg") {
  const auto f = [](double x) { return std::exp(-x) * std::sin(3 * x) + 1.0 / (1.0 + x * x); };
  const double ref = oracle::romberg(f, 0.0, 5.0, 1e-14);
  const std::vector<double> br{0, 1, 2, 3.5, 5};
  CHECK(composite_gauss(f, br, gauss_legendre(12)) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(integrate_adaptive(f, 0.0, 5.0).value == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("integral to infinity of a decaying tail") {
  const auto r = integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  const auto p = integrate_to_infinity([](double x) { return 1.0 / (x * x * x * x * x * x); }, 1.0, 1.0);
  CHECK(p.value == doctest::Approx(0.2).epsilon(1e-10));
}

TEST_CASE("sphere rule: total area and low-degree moments") {
  for (int n : {3, 5, 7}) {
    const SphereRule rule = sphere_rule(n, 3);
    double area = 0.0, x1sq = 0.0, x1 = 0.0, x1x2sq = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const auto d = rule.direction(k);
      area += rule.weights[k];
      x1sq += rule.weights[k] * d[0] * d[0];
      x1 += rule.weights[k] * d[n - 1];
      x1x2sq += rule.weights[k] * d[0] * d[0] * d[1] * d[1];
    }
    const double S = oracle::sphere_area(n);
    CHECK(area == doctest::Approx(S).epsilon(1e-12));
    CHECK(x1sq == doctest::Approx(S / n).epsilon(1e-12));
    CHECK(std::abs(x1) < 1e-12);
    // int x1^2 x2^2 = |S| / (n (n + 2))
    CHECK(x1x2sq == doctest::Approx(S / (n * (n + 2.0))).epsilon(1e-12));
  }
}

TEST_CASE("clamped spline reproduces a cubic") {
  const auto f = [](double x) { return 1 - 2 * x + 0.5 * x * x * x; };
  const auto df = [](double x) { return -2 + 1.5 * x * x; };
  std::vector<double> x{0, 0.3, 0.7, 1.6, 2.0, 3.1}, y;
  for (double v : x) y.push_back(f(v));
  const CubicSpline s(x, y, df(0.0), df(3.1));
  for (double t : {0.05, 0.5, 1.1, 2.9}) {
    CHECK(s(t) == doctest::Approx(f(t)).epsilon(1e-13));
    CHECK(s.derivative(t) == doctest::Approx(df(t)).epsilon(1e-12));
    CHECK(s.second_derivative(t) == doctest::Approx(3 * t).epsilon(1e-11));
  }
  CHECK_THROWS_AS(CubicSpline({0, 0}, {1, 2}), blowup::DomainError);
}

TEST_CASE("radial stencil is exact on r^2 and kills constants") {
  const int n = 7;
  std::vector<double> r{0.0};
  for (int i = 1; i <= 40; ++i) r.push_back(r.back() + 0.01 * std::pow(1.1, i));
  const RadialStencil st(r, n);
  std::vector<double> q, c(r.size(), 3.0);
  for (double v : r) q.push_back(v * v);
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    CHECK(st.laplacian(q, i) == doctest::Approx(2.0 * n).epsilon(1e-10));
    CHECK(std::abs(st.laplacian(c, i)) < 1e-12);
  }
}

TEST_CASE("dopri5 integrates exponential growth") {
  std::vector<double> y{1.0};
  const auto rhs = [](double, const std::vector<double>& v, std::vector<double>& out) { out.assign(1, v[0]); };
  const double t = dopri5_integrate(rhs, 0.0, 2.0, y, 1e-12, 1e-14, 1e-3, [](double, const std::vector<double>&) { return true; });
  CHECK(t == 2.0);
  CHECK(y[0] == doctest::Approx(std::exp(2.0)).epsilon(1e-10));
}
