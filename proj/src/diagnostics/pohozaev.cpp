#include "blowup/diagnostics/pohozaev.hpp"

#include <cmath>
#include <memory>

#include "blowup/error.hpp"
#include "blowup/kernel/bubble.hpp"
#include "blowup/numerics/quadrature.hpp"

namespace blowup::diagnostics {

RadialProfile RadialProfile::of(const solver::RadialField& field) {
  auto spline = std::make_shared<numerics::CubicSpline>(field.interpolant());
  return {[spline](double r) { return (*spline)(r); }, [spline](double r) { return spline->derivative(r); },
          spline->back()};
}

RadialProfile RadialProfile::of(solver::RadialSlice slice) {
  auto s = std::make_shared<solver::RadialSlice>(std::move(slice));
  return {[s](double r) { return s->value(r); }, [s](double r) { return s->derivative(r); },
          std::numeric_limits<double>::infinity()};
}

RadialProfile RadialProfile::bubble(const Dimension& dim, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("bubble scale must be positive");
  const double a = std::pow(lambda, -dim.alpha);
  return {[dim, lambda, a](double r) { return a * kernel::UnitBubble::value(r / lambda, dim); },
          [dim, lambda, a](double r) { return a / lambda * kernel::UnitBubble::dr(r / lambda, dim); },
          std::numeric_limits<double>::infinity()};
}

double pohozaev(const RadialProfile& v, double r, const Dimension& dim) {
  if (!(r > 0.0) || r > v.r_max) throw RangeError("Pohozaev radius " + std::to_string(r) + " outside the field");
  const double u = v.value(r);
  const double ur = v.derivative(r);
  const double area = dim.sphere_area() * std::pow(r, dim.n - 1);
  return area * (-0.5 * ur * ur - (dim.n - 2.0) / (2.0 * r) * u * ur);
}

double pohozaev_boundary_term(const RadialProfile& v, double r, const Dimension& dim) {
  if (!(r > 0.0) || r > v.r_max) throw RangeError("Pohozaev radius " + std::to_string(r) + " outside the field");
  const double area = dim.sphere_area() * std::pow(r, dim.n - 1);
  return area * std::pow(std::abs(v.value(r)), dim.p + 1.0) / (dim.p + 1.0);
}

PohozaevBalance pohozaev_balance(const solver::RadialSource& source, double t, double r) {
  const Dimension& dim = source.dim();
  const solver::RadialSlice u = source.slice(t);
  const solver::RadialSlice ut = source.rate(t);
  const RadialProfile profile = RadialProfile::of(u);
  PohozaevBalance out;
  out.lhs = pohozaev(profile, r, dim) - pohozaev_boundary_term(profile, r, dim);

  std::vector<double> cuts{0.0};
  for (double k : u.knots_between(0.0, r)) cuts.push_back(k);
  cuts.push_back(r);
  const double integral = numerics::composite_gauss(
      [&](double rho) {
        return ut.value(rho) * (rho * u.derivative(rho) + dim.alpha * u.value(rho)) * std::pow(rho, dim.n - 1);
      },
      cuts, numerics::cached_gauss_legendre(6));
  out.rhs = -dim.sphere_area() * integral / r;
  return out;
}

double pohozaev_identity_residual(const solver::Trajectory& traj, double t, double r) {
  return pohozaev_balance(solver::TrajectorySource(traj), t, r).residual();
}

}  // namespace blowup::diagnostics
