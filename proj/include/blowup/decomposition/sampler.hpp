#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "blowup/kernel/bubble.hpp"
#include "blowup/kernel/spectral.hpp"
#include "blowup/solver/grid.hpp"

namespace blowup::decomposition {

enum class Provenance { pde_snapshot, synthetic, analytic };
std::string to_string(Provenance provenance);

/// x -> (u(x), grad u(x)) on R^n. Implementations are immutable and may be
/// evaluated concurrently.
class FieldSampler {
 public:
  virtual ~FieldSampler() = default;
  virtual const Dimension& dim() const = 0;
  virtual Provenance provenance() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  /// Returns u(x) and writes grad u(x) into `grad` (size n).
  virtual double evaluate(std::span<const double> x, std::span<double> grad) const = 0;
  /// Radius of the ball about the origin on which the data are meaningful.
  virtual double domain_radius() const { return std::numeric_limits<double>::infinity(); }
  /// True when u depends on |x| only.
  virtual bool radial() const { return false; }
  /// u(r) and u'(r) for radial samplers; throws DomainError otherwise.
  virtual double radial_evaluate(double r, double& derivative) const;
  /// Radii where the radial profile is only piecewise smooth (spline knots).
  virtual std::vector<double> radial_knots() const { return {}; }
};

/// sum_j W_{xi_j,lambda_j} + a_j Z_{0,xi_j,lambda_j}.
class BubbleSum : public FieldSampler {
 public:
  /// `spectral` is needed as soon as some a_j != 0 and must outlive the sampler.
  explicit BubbleSum(const Dimension& dim, const kernel::SpectralData* spectral = nullptr);

  BubbleSum& add(const kernel::BubbleParams& params);
  const std::vector<kernel::BubbleParams>& terms() const { return terms_; }

  const Dimension& dim() const override { return dim_; }
  Provenance provenance() const override { return Provenance::synthetic; }
  double value(std::span<const double> x) const override;
  double evaluate(std::span<const double> x, std::span<double> grad) const override;
  bool radial() const override;
  double radial_evaluate(double r, double& derivative) const override;

 private:
  Dimension dim_;
  const kernel::SpectralData* spectral_;
  std::vector<kernel::BubbleParams> terms_;
};

/// A radial field on its grid, interpolated by a cubic spline and extended by zero past R.
class RadialFieldSampler : public FieldSampler {
 public:
  explicit RadialFieldSampler(const solver::RadialField& field);
  RadialFieldSampler(const Dimension& dim, numerics::CubicSpline spline);

  const Dimension& dim() const override { return dim_; }
  Provenance provenance() const override { return Provenance::pde_snapshot; }
  double value(std::span<const double> x) const override;
  double evaluate(std::span<const double> x, std::span<double> grad) const override;
  double domain_radius() const override { return spline_.back(); }
  bool radial() const override { return true; }
  double radial_evaluate(double r, double& derivative) const override;
  std::vector<double> radial_knots() const override { return {spline_.knots().begin(), spline_.knots().end()}; }

 private:
  Dimension dim_;
  numerics::CubicSpline spline_;
};

/// Closed-form field given by callables.
class AnalyticSampler : public FieldSampler {
 public:
  using ValueGrad = std::function<double(std::span<const double>, std::span<double>)>;
  using Radial = std::function<double(double, double&)>;

  AnalyticSampler(const Dimension& dim, ValueGrad f, Radial radial = {},
                  Provenance provenance = Provenance::analytic);

  const Dimension& dim() const override { return dim_; }
  Provenance provenance() const override { return provenance_; }
  double value(std::span<const double> x) const override;
  double evaluate(std::span<const double> x, std::span<double> grad) const override;
  bool radial() const override { return static_cast<bool>(radial_); }
  double radial_evaluate(double r, double& derivative) const override;

 private:
  Dimension dim_;
  ValueGrad f_;
  Radial radial_;
  Provenance provenance_;
};

/// weight_a * A + weight_b * B.
class SumSampler : public FieldSampler {
 public:
  SumSampler(std::shared_ptr<const FieldSampler> a, std::shared_ptr<const FieldSampler> b, double weight_a = 1.0,
             double weight_b = 1.0);

  const Dimension& dim() const override { return a_->dim(); }
  Provenance provenance() const override;
  double value(std::span<const double> x) const override;
  double evaluate(std::span<const double> x, std::span<double> grad) const override;
  double domain_radius() const override;
  bool radial() const override { return a_->radial() && b_->radial(); }
  double radial_evaluate(double r, double& derivative) const override;
  std::vector<double> radial_knots() const override;

 private:
  std::shared_ptr<const FieldSampler> a_, b_;
  double wa_, wb_;
};

/// mu^{-(n-2)/2} u((x - shift) / mu): the critical rescaling of a sampler
/// moved to a new center.
class TransformedSampler : public FieldSampler {
 public:
  TransformedSampler(std::shared_ptr<const FieldSampler> base, Point shift, double mu);

  const Dimension& dim() const override { return base_->dim(); }
  Provenance provenance() const override { return base_->provenance(); }
  double value(std::span<const double> x) const override;
  double evaluate(std::span<const double> x, std::span<double> grad) const override;

 private:
  std::shared_ptr<const FieldSampler> base_;
  Point shift_;
  double mu_;
};

}  // namespace blowup::decomposition
