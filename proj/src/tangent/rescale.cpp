#include "blowup/tangent/rescale.hpp"

#include <algorithm>
#include <cmath>

#include "blowup/error.hpp"

namespace blowup::tangent {

RescaledView::RescaledView(std::shared_ptr<const solver::RadialSource> base, Point a, double T, double lambda)
    : base_(std::move(base)), a_(std::move(a)), T_(T), lambda_(lambda) {
  if (!base_) throw DomainError("rescaled view needs a source");
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw DomainError("rescaling needs lambda > 0");
  if (static_cast<int>(a_.size()) != base_->dim().n) throw DomainError("base point has the wrong dimension");
  amplitude_ = std::pow(lambda_, 2.0 / (base_->dim().p - 1.0));
  centered_ = std::all_of(a_.begin(), a_.end(), [](double c) { return c == 0.0; });
}

solver::RadialSlice RescaledView::slice(double t) const {
  if (!centered_) throw DomainError("radial slices need the view centered at the origin");
  return base_->slice(T_ + lambda_ * lambda_ * t).scaled(amplitude_, lambda_);
}

solver::RadialSlice RescaledView::rate(double t) const {
  if (!centered_) throw DomainError("radial slices need the view centered at the origin");
  return base_->rate(T_ + lambda_ * lambda_ * t).scaled(amplitude_ * lambda_ * lambda_, lambda_);
}

RescaledView::Frame RescaledView::frame(double t) const {
  return Frame(base_->slice(T_ + lambda_ * lambda_ * t), a_, lambda_, amplitude_);
}

double RescaledView::Frame::value(std::span<const double> y) const {
  if (y.size() != a_.size()) throw DomainError("point has the wrong dimension");
  double r2 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double x = a_[i] + lambda_ * y[i];
    r2 += x * x;
  }
  return amplitude_ * base_.value(std::sqrt(r2));
}

RescaledView rescale(const solver::Trajectory& traj, const Point& a, double T, double lambda) {
  return RescaledView(std::make_shared<solver::TrajectorySource>(traj), a, T, lambda);
}

RescaledView rescale(std::shared_ptr<const RescaledView> view, double lambda) {
  if (!view->centered()) throw DomainError("only centered views can be rescaled again");
  const int n = view->dim().n;
  return RescaledView(std::move(view), Point(n, 0.0), 0.0, lambda);
}

}  // namespace blowup::tangent
