#include "blowup/decomposition/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/error.hpp"

namespace blowup::decomposition {

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::pde_snapshot: return "pde_snapshot";
    case Provenance::synthetic: return "synthetic";
    case Provenance::analytic: return "analytic";
  }
  return "analytic";
}

double FieldSampler::radial_evaluate(double, double&) const {
  throw DomainError("sampler is not radial about the origin");
}

BubbleSum::BubbleSum(const Dimension& dim, const kernel::SpectralData* spectral) : dim_(dim), spectral_(spectral) {}

BubbleSum& BubbleSum::add(const kernel::BubbleParams& params) {
  if (!(params.lambda > 0.0)) throw DomainError("bubble scale lambda must be positive");
  if (static_cast<int>(params.xi.size()) != dim_.n) throw DomainError("bubble center has the wrong dimension");
  if (params.a != 0.0 && !spectral_) throw DomainError("a negative-mode term needs spectral data");
  terms_.push_back(params);
  return *this;
}

double BubbleSum::value(std::span<const double> x) const {
  double u = 0.0;
  for (const auto& t : terms_) {
    const double r = distance(x, t.xi) / t.lambda;
    u += std::pow(t.lambda, -dim_.alpha) * kernel::UnitBubble::value(r, dim_);
    if (t.a != 0.0) u += t.a * std::pow(t.lambda, -0.5 * dim_.n) * spectral_->z0(r);
  }
  return u;
}

double BubbleSum::evaluate(std::span<const double> x, std::span<double> grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
  double u = 0.0;
  for (const auto& t : terms_) {
    const double dist = distance(x, t.xi);
    const double r = dist / t.lambda;
    const double amp = std::pow(t.lambda, -dim_.alpha);
    u += amp * kernel::UnitBubble::value(r, dim_);
    double slope = amp / t.lambda * kernel::UnitBubble::dr(r, dim_);
    if (t.a != 0.0) {
      const double za = t.a * std::pow(t.lambda, -0.5 * dim_.n);
      u += za * spectral_->z0(r);
      slope += za / t.lambda * spectral_->z0_derivative(r);
    }
    if (dist > 0.0)
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += slope * (x[i] - t.xi[i]) / dist;
  }
  return u;
}

bool BubbleSum::radial() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const kernel::BubbleParams& t) {
    return std::all_of(t.xi.begin(), t.xi.end(), [](double c) { return c == 0.0; });
  });
}

double BubbleSum::radial_evaluate(double r, double& derivative) const {
  if (!radial()) return FieldSampler::radial_evaluate(r, derivative);
  double u = 0.0;
  derivative = 0.0;
  for (const auto& t : terms_) {
    const double s = r / t.lambda;
    const double amp = std::pow(t.lambda, -dim_.alpha);
    u += amp * kernel::UnitBubble::value(s, dim_);
    derivative += amp / t.lambda * kernel::UnitBubble::dr(s, dim_);
    if (t.a != 0.0) {
      const double za = t.a * std::pow(t.lambda, -0.5 * dim_.n);
      u += za * spectral_->z0(s);
      derivative += za / t.lambda * spectral_->z0_derivative(s);
    }
  }
  return u;
}

RadialFieldSampler::RadialFieldSampler(const solver::RadialField& field)
    : dim_(field.grid->dim()), spline_(field.interpolant()) {}

RadialFieldSampler::RadialFieldSampler(const Dimension& dim, numerics::CubicSpline spline)
    : dim_(dim), spline_(std::move(spline)) {}

double RadialFieldSampler::radial_evaluate(double r, double& derivative) const {
  if (r > spline_.back()) {
    derivative = 0.0;
    return 0.0;
  }
  double v = 0.0;
  spline_.evaluate(r, v, derivative);
  return v;
}

double RadialFieldSampler::value(std::span<const double> x) const {
  double d = 0.0;
  return radial_evaluate(norm(x), d);
}

double RadialFieldSampler::evaluate(std::span<const double> x, std::span<double> grad) const {
  const double r = norm(x);
  double d = 0.0;
  const double v = radial_evaluate(r, d);
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = r > 0.0 ? d * x[i] / r : 0.0;
  return v;
}

AnalyticSampler::AnalyticSampler(const Dimension& dim, ValueGrad f, Radial radial, Provenance provenance)
    : dim_(dim), f_(std::move(f)), radial_(std::move(radial)), provenance_(provenance) {}

double AnalyticSampler::value(std::span<const double> x) const {
  std::vector<double> g(x.size());
  return f_(x, g);
}

double AnalyticSampler::evaluate(std::span<const double> x, std::span<double> grad) const { return f_(x, grad); }

double AnalyticSampler::radial_evaluate(double r, double& derivative) const {
  if (!radial_) return FieldSampler::radial_evaluate(r, derivative);
  return radial_(r, derivative);
}

SumSampler::SumSampler(std::shared_ptr<const FieldSampler> a, std::shared_ptr<const FieldSampler> b, double weight_a,
                       double weight_b)
    : a_(std::move(a)), b_(std::move(b)), wa_(weight_a), wb_(weight_b) {
  if (a_->dim().n != b_->dim().n) throw DomainError("summed samplers live in different dimensions");
}

Provenance SumSampler::provenance() const {
  return a_->provenance() == b_->provenance() ? a_->provenance() : Provenance::synthetic;
}

double SumSampler::value(std::span<const double> x) const { return wa_ * a_->value(x) + wb_ * b_->value(x); }

double SumSampler::evaluate(std::span<const double> x, std::span<double> grad) const {
  std::vector<double> gb(grad.size());
  const double va = a_->evaluate(x, grad);
  const double vb = b_->evaluate(x, gb);
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] = wa_ * grad[i] + wb_ * gb[i];
  return wa_ * va + wb_ * vb;
}

double SumSampler::domain_radius() const { return std::min(a_->domain_radius(), b_->domain_radius()); }

double SumSampler::radial_evaluate(double r, double& derivative) const {
  double da = 0.0, db = 0.0;
  const double v = wa_ * a_->radial_evaluate(r, da) + wb_ * b_->radial_evaluate(r, db);
  derivative = wa_ * da + wb_ * db;
  return v;
}

std::vector<double> SumSampler::radial_knots() const {
  std::vector<double> k = a_->radial_knots();
  const std::vector<double> kb = b_->radial_knots();
  k.insert(k.end(), kb.begin(), kb.end());
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

TransformedSampler::TransformedSampler(std::shared_ptr<const FieldSampler> base, Point shift, double mu)
    : base_(std::move(base)), shift_(std::move(shift)), mu_(mu) {
  if (!(mu_ > 0.0)) throw DomainError("rescaling factor must be positive");
  if (static_cast<int>(shift_.size()) != base_->dim().n) throw DomainError("shift has the wrong dimension");
}

double TransformedSampler::value(std::span<const double> x) const {
  Point y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = (x[i] - shift_[i]) / mu_;
  return std::pow(mu_, -dim().alpha) * base_->value(y);
}

double TransformedSampler::evaluate(std::span<const double> x, std::span<double> grad) const {
  Point y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = (x[i] - shift_[i]) / mu_;
  const double amp = std::pow(mu_, -dim().alpha);
  const double v = base_->evaluate(y, grad);
  for (double& g : grad) g *= amp / mu_;
  return amp * v;
}

}  // namespace blowup::decomposition
