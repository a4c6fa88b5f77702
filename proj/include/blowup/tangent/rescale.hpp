#pragma once

#include <memory>
#include <span>
#include <vector>

#include "blowup/solver/radial_source.hpp"
#include "blowup/solver/trajectory.hpp"

namespace blowup::tangent {

/// u_lambda(y, t) = lambda^{2/(p-1)} u(a + lambda y, T + lambda^2 t) over a
/// radial source. It is itself a radial source when the base point is the
/// origin, so views can be stacked.
class RescaledView : public solver::RadialSource {
 public:
  /// Throws DomainError unless lambda > 0 and a has the source's dimension.
  RescaledView(std::shared_ptr<const solver::RadialSource> base, Point a, double T, double lambda);

  const Point& base_point() const { return a_; }
  double blowup_time() const { return T_; }
  double lambda() const { return lambda_; }
  bool centered() const { return centered_; }

  const Dimension& dim() const override { return base_->dim(); }
  double t_begin() const override { return (base_->t_begin() - T_) / (lambda_ * lambda_); }
  double t_end() const override { return (base_->t_end() - T_) / (lambda_ * lambda_); }
  /// Needs a centered view (DomainError otherwise); RangeError outside [t_begin, t_end].
  solver::RadialSlice slice(double t) const override;
  solver::RadialSlice rate(double t) const override;

  /// Point values at rescaled time t for any base point.
  class Frame {
   public:
    double value(std::span<const double> y) const;

   private:
    friend class RescaledView;
    Frame(solver::RadialSlice base, Point a, double lambda, double amplitude)
        : base_(std::move(base)), a_(std::move(a)), lambda_(lambda), amplitude_(amplitude) {}
    solver::RadialSlice base_;
    Point a_;
    double lambda_;
    double amplitude_;
  };
  Frame frame(double t) const;
  double value(std::span<const double> y, double t) const { return frame(t).value(y); }

 private:
  std::shared_ptr<const solver::RadialSource> base_;
  Point a_;
  double T_;
  double lambda_;
  double amplitude_;  // lambda^{2/(p-1)}
  bool centered_;
};

/// View of a trajectory. The trajectory must outlive the view.
RescaledView rescale(const solver::Trajectory& traj, const Point& a, double T, double lambda);

/// Rescaling of a centered view about its own origin.
RescaledView rescale(std::shared_ptr<const RescaledView> view, double lambda);

}  // namespace blowup::tangent
