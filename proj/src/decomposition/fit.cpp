#include "blowup/decomposition/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "blowup/cutoff.hpp"
#include "blowup/error.hpp"
#include "blowup/numerics/quadrature.hpp"

namespace blowup::decomposition {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Radial nodes in the bubble variable y = (x - xi) / lambda, with the
// weight rho^{n-1} eta(rho / K) folded in, and the unit-bubble modes there.
struct RadialNodes {
  std::vector<double> rho, weight, w, wp, z0, zd;
  std::vector<double> t0, tj, td;  // normalized test modes
};

std::vector<double> base_breakpoints(double K, bool independent) {
  static const std::vector<double> primary{0, 0.5, 1, 2, 3, 4, 6, 8, 11, 14, 17, 20, 25, 30, 35, 40};
  static const std::vector<double> other{0, 0.7, 1.5, 2.5, 3.5, 5, 7, 9.5, 12.5, 16, 20, 24, 28, 32, 36, 40};
  std::vector<double> b = independent ? other : primary;
  for (double& v : b) v *= K / 20.0;
  return b;
}

RadialNodes radial_nodes(const Dimension& dim, const kernel::SpectralData& spectral, const FitOptions& opt,
                         const std::vector<double>& norms, bool independent, const std::vector<double>& knots_y) {
  std::vector<double> cuts = base_breakpoints(opt.K, independent);
  const double top = cuts.back();
  for (double k : knots_y)
    if (k > 0.0 && k < top) cuts.push_back(k);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const auto& rule = numerics::cached_gauss_legendre(opt.radial_order + (independent ? 2 : 0));
  RadialNodes out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double half = 0.5 * (cuts[i + 1] - cuts[i]);
    const double mid = 0.5 * (cuts[i + 1] + cuts[i]);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double r = mid + half * rule.nodes[q];
      out.rho.push_back(r);
      out.weight.push_back(half * rule.weights[q] * std::pow(r, dim.n - 1) * eta_profile(r / opt.K));
      const double w = kernel::UnitBubble::value(r, dim);
      const double wp = kernel::UnitBubble::dr(r, dim);
      out.w.push_back(w);
      out.wp.push_back(wp);
      out.z0.push_back(spectral.z0(r));
      out.zd.push_back(dim.alpha * w + r * wp);
      out.t0.push_back(out.z0.back() / norms[0]);
      out.tj.push_back(wp / norms[1]);
      out.td.push_back(out.zd.back() / norms[dim.n + 1]);
    }
  }
  return out;
}

// sqrt(int eta(|y|/K) Z_i(y)^2 dy) for i = 0..n+1. The orthogonality
// conditions use Z_i divided by these norms.
std::vector<double> mode_norms(const Dimension& dim, const kernel::SpectralData& spectral, double K) {
  const int n = dim.n;
  std::vector<double> cuts{0.0};
  for (int i = 1; i <= 160; ++i) cuts.push_back(2.0 * K * i / 160.0);
  const auto radial = [&](auto&& f) {
    return dim.sphere_area() *
           numerics::composite_gauss([&](double r) { return f(r) * std::pow(r, n - 1) * eta_profile(r / K); }, cuts,
                                     numerics::cached_gauss_legendre(12));
  };
  const double z0 = radial([&](double r) { return spectral.z0(r) * spectral.z0(r); });
  const double zj = radial([&](double r) { return std::pow(kernel::UnitBubble::dr(r, dim), 2); }) / n;
  const double zd = radial([&](double r) { return std::pow(kernel::UnitBubble::dilation_mode(r, dim), 2); });
  std::vector<double> out(n + 2, std::sqrt(zj));
  out[0] = std::sqrt(z0);
  out[n + 1] = std::sqrt(zd);
  return out;
}

std::vector<double> annulus_edges(double K) {
  std::vector<double> e{0.0};
  for (double r = 1.0; r < 2.0 * K; r *= 2.0) e.push_back(r);
  e.push_back(2.0 * K);
  return e;
}

struct Evaluation {
  VectorXd G;  // residuals divided by lambda
  MatrixXd J;  // dG / d(a, xi, lambda) or d(a, lambda)
  std::vector<AnnulusNorm> norms;
};

class System {
 public:
  System(const FieldSampler& u, const kernel::SpectralData& spectral, const FitOptions& opt, bool independent,
         bool radial)
      : u_(u),
        dim_(u.dim()),
        spectral_(spectral),
        opt_(opt),
        independent_(independent),
        radial_(radial),
        norms_(mode_norms(dim_, spectral_, opt_.K)) {
    if (!radial_) {
      sphere_ = numerics::sphere_rule(dim_.n, opt.sphere_order, independent ? 0.5 : 0.0);
      nodes_ = radial_nodes(dim_, spectral_, opt_, norms_, independent_, {});
    } else {
      knots_ = u_.radial_knots();
    }
  }

  int unknowns() const { return radial_ ? 2 : dim_.n + 2; }

  // theta = (a, xi..., lambda) or (a, lambda).
  Evaluation evaluate(const VectorXd& theta, bool jacobian, bool norms) const {
    return radial_ ? evaluate_radial(theta, jacobian, norms) : evaluate_full(theta, jacobian, norms);
  }

  std::vector<double> residuals(const Evaluation& e, double lambda) const {
    const int n = dim_.n;
    std::vector<double> r(n + 2, 0.0);
    if (radial_) {
      r[0] = lambda * e.G[0];
      r[n + 1] = lambda * e.G[1];
    } else {
      for (int i = 0; i < n + 2; ++i) r[i] = lambda * e.G[i];
    }
    return r;
  }

 private:
  Evaluation evaluate_full(const VectorXd& theta, bool jacobian, bool with_norms) const {
    const int n = dim_.n;
    const int m = n + 2;
    const double a = theta[0];
    const double lambda = theta[n + 1];
    const double amp = std::pow(lambda, dim_.alpha);
    const double b = a / lambda;
    Evaluation e;
    e.G = VectorXd::Zero(m);
    if (jacobian) e.J = MatrixXd::Zero(m, m);
    const std::vector<double> edges = annulus_edges(opt_.K);
    std::vector<double> sup(edges.size() - 1, 0.0);
    std::vector<double> x(n), grad(n);
    VectorXd z(m), col(m);
    for (std::size_t k = 0; k < nodes_.rho.size(); ++k) {
      const double rho = nodes_.rho[k];
      const double wr = nodes_.weight[k];
      std::size_t band = 0;
      while (band + 1 < sup.size() && rho >= edges[band + 1]) ++band;
      VectorXd gk = VectorXd::Zero(m);
      MatrixXd jk;
      if (jacobian) jk = MatrixXd::Zero(m, m);
      for (std::size_t d = 0; d < sphere_.size(); ++d) {
        const auto omega = sphere_.direction(d);
        for (int i = 0; i < n; ++i) x[i] = theta[1 + i] + lambda * rho * omega[i];
        const double uv = u_.evaluate(x, grad);
        const double phi = amp * uv - nodes_.w[k] - b * nodes_.z0[k];
        if (with_norms) sup[band] = std::max(sup[band], std::abs(phi));
        const double w = sphere_.weights[d];
        z[0] = nodes_.t0[k];
        for (int i = 0; i < n; ++i) z[1 + i] = nodes_.tj[k] * omega[i];
        z[n + 1] = nodes_.td[k];
        gk.noalias() += (w * phi) * z;
        if (jacobian) {
          double radial_grad = 0.0;
          for (int i = 0; i < n; ++i) radial_grad += omega[i] * grad[i];
          col[0] = -nodes_.z0[k] / lambda;
          for (int i = 0; i < n; ++i) col[1 + i] = amp * grad[i];
          col[n + 1] = dim_.alpha * amp / lambda * uv + amp * rho * radial_grad + a / (lambda * lambda) * nodes_.z0[k];
          jk.noalias() += (w * z) * col.transpose();
        }
      }
      e.G += wr * gk;
      if (jacobian) e.J += wr * jk;
    }
    if (with_norms)
      for (std::size_t i = 0; i < sup.size(); ++i) e.norms.push_back({edges[i], edges[i + 1], sup[i]});
    return e;
  }

  Evaluation evaluate_radial(const VectorXd& theta, bool jacobian, bool with_norms) const {
    const double a = theta[0];
    const double lambda = theta[1];
    const double amp = std::pow(lambda, dim_.alpha);
    const double b = a / lambda;
    std::vector<double> knots_y;
    knots_y.reserve(knots_.size());
    for (double r : knots_) knots_y.push_back(r / lambda);
    const RadialNodes nodes = radial_nodes(dim_, spectral_, opt_, norms_, independent_, knots_y);
    const double area = dim_.sphere_area();
    const std::vector<double> edges = annulus_edges(opt_.K);
    std::vector<double> sup(edges.size() - 1, 0.0);
    Evaluation e;
    e.G = VectorXd::Zero(2);
    if (jacobian) e.J = MatrixXd::Zero(2, 2);
    for (std::size_t k = 0; k < nodes.rho.size(); ++k) {
      const double rho = nodes.rho[k];
      double ur = 0.0;
      const double uv = u_.radial_evaluate(lambda * rho, ur);
      const double phi = amp * uv - nodes.w[k] - b * nodes.z0[k];
      if (with_norms) {
        std::size_t band = 0;
        while (band + 1 < sup.size() && rho >= edges[band + 1]) ++band;
        sup[band] = std::max(sup[band], std::abs(phi));
      }
      const double w = area * nodes.weight[k];
      const double z[2] = {nodes.t0[k], nodes.td[k]};
      e.G[0] += w * phi * z[0];
      e.G[1] += w * phi * z[1];
      if (jacobian) {
        const double col[2] = {-nodes.z0[k] / lambda,
                               dim_.alpha * amp / lambda * uv + amp * rho * ur + a / (lambda * lambda) * nodes.z0[k]};
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) e.J(i, j) += w * z[i] * col[j];
      }
    }
    if (with_norms)
      for (std::size_t i = 0; i < sup.size(); ++i) e.norms.push_back({edges[i], edges[i + 1], sup[i]});
    return e;
  }

  const FieldSampler& u_;
  Dimension dim_;
  const kernel::SpectralData& spectral_;
  FitOptions opt_;
  bool independent_;
  bool radial_;
  std::vector<double> norms_;
  numerics::SphereRule sphere_;
  RadialNodes nodes_;
  std::vector<double> knots_;
};

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

kernel::BubbleParams unpack(const VectorXd& theta, bool radial, int n) {
  kernel::BubbleParams p = kernel::BubbleParams::centered(n, theta[radial ? 1 : n + 1], theta[0]);
  if (!radial)
    for (int i = 0; i < n; ++i) p.xi[i] = theta[1 + i];
  return p;
}

void check_inputs(const FieldSampler& u, const kernel::SpectralData& spectral, const FitOptions& opt) {
  if (spectral.n() != u.dim().n) throw DomainError("spectral data belong to another dimension");
  if (!(opt.K > 0.0)) throw DomainError("cutoff radius K must be positive");
  if (opt.sphere_order < 1 || opt.radial_order < 2) throw DomainError("quadrature orders too small");
}

DecompositionResult newton(const System& system, VectorXd theta, bool radial, int n, const FitOptions& opt) {
  DecompositionResult result;
  result.radial = radial;
  const int last = system.unknowns() - 1;
  for (int it = 0;; ++it) {
    Evaluation e = system.evaluate(theta, true, false);
    const double lambda = theta[last];
    const double size = lambda * e.G.cwiseAbs().maxCoeff();
    result.params = unpack(theta, radial, n);
    result.iterations = it;
    result.residuals = system.residuals(e, lambda);

    const Eigen::JacobiSVD<MatrixXd> svd(e.J);
    const auto& sv = svd.singularValues();
    result.rcond = sv[sv.size() - 1] / sv[0];
    double dominance = 0.0;
    for (int i = 0; i <= last; ++i) {
      double off = 0.0;
      for (int j = 0; j <= last; ++j)
        if (j != i) off += std::abs(e.J(i, j)) / std::sqrt(std::abs(e.J(i, i) * e.J(j, j)));
      dominance = std::max(dominance, off);
    }
    result.dominance = dominance;

    if (size <= opt.tol_orth) {
      result.converged = true;
      break;
    }
    if (it >= opt.max_iterations) {
      result.failure = "maximum Newton iterations reached";
      break;
    }
    if (!(result.rcond >= opt.rcond_min)) {
      result.failure = "Jacobian singular";
      break;
    }
    if (!(dominance <= opt.dominance_limit)) {
      result.failure = "Jacobian not diagonally dominant";
      break;
    }
    const VectorXd delta = e.J.fullPivLu().solve(-e.G);
    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opt.max_halvings; ++h, t *= 0.5) {
      const VectorXd trial = theta + t * delta;
      if (!(trial[last] > 0.0) || !trial.allFinite()) continue;
      const Evaluation et = system.evaluate(trial, false, false);
      const double trial_size = trial[last] * et.G.cwiseAbs().maxCoeff();
      if (std::isfinite(trial_size) && trial_size < size) {
        theta = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      result.failure = "step halving exhausted";
      break;
    }
  }
  result.error_field_norms = system.evaluate(theta, false, true).norms;
  return result;
}

}  // namespace

double DecompositionResult::max_residual() const { return max_abs(residuals); }

DecompositionResult fit_orthogonal(const FieldSampler& u, const kernel::BubbleParams& guess,
                                   const kernel::SpectralData& spectral, const FitOptions& options) {
  check_inputs(u, spectral, options);
  const int n = u.dim().n;
  if (static_cast<int>(guess.xi.size()) != n) throw DomainError("guess center has the wrong dimension");
  if (!(guess.lambda > 0.0)) throw DomainError("guess lambda must be positive");
  const System system(u, spectral, options, false, false);
  VectorXd theta(n + 2);
  theta[0] = guess.a;
  for (int i = 0; i < n; ++i) theta[1 + i] = guess.xi[i];
  theta[n + 1] = guess.lambda;
  return newton(system, theta, false, n, options);
}

DecompositionResult fit_orthogonal_radial(const FieldSampler& u, double lambda_guess, double a_guess,
                                          const kernel::SpectralData& spectral, const FitOptions& options) {
  check_inputs(u, spectral, options);
  if (!u.radial()) throw DomainError("radial fit needs a radial sampler");
  if (!(lambda_guess > 0.0)) throw DomainError("guess lambda must be positive");
  const System system(u, spectral, options, false, true);
  VectorXd theta(2);
  theta << a_guess, lambda_guess;
  return newton(system, theta, true, u.dim().n, options);
}

std::vector<double> orthogonality_residuals(const FieldSampler& u, const kernel::BubbleParams& params,
                                            const kernel::SpectralData& spectral, const FitOptions& options,
                                            bool independent, bool radial) {
  check_inputs(u, spectral, options);
  const int n = u.dim().n;
  if (!(params.lambda > 0.0)) throw DomainError("lambda must be positive");
  const System system(u, spectral, options, independent, radial);
  VectorXd theta(system.unknowns());
  theta[0] = params.a;
  if (radial) {
    theta[1] = params.lambda;
  } else {
    for (int i = 0; i < n; ++i) theta[1 + i] = params.xi[i];
    theta[n + 1] = params.lambda;
  }
  return system.residuals(system.evaluate(theta, false, false), params.lambda);
}

bool certify(const FieldSampler& u, DecompositionResult& result, const kernel::SpectralData& spectral,
             const FitOptions& options) {
  result.certificate = max_abs(orthogonality_residuals(u, result.params, spectral, options, true, result.radial));
  result.certified = result.converged && result.certificate <= options.certificate_factor * options.tol_orth;
  return result.certified;
}

Point ascend_to_max(const FieldSampler& u, const Point& start, int max_iterations) {
  const Dimension& dim = u.dim();
  const int n = dim.n;
  Point x = start;
  std::vector<double> grad(n), trial(n), trial_grad(n);
  double value = u.evaluate(x, grad);
  for (int it = 0; it < max_iterations && value > 0.0; ++it) {
    // For a bubble this step lands on the center from anywhere in its core.
    const double scale = std::pow(value, -1.0 / dim.alpha);
    const double factor = n * scale * scale / value;
    double t = 1.0;
    bool moved = false;
    double step_size = 0.0;
    for (int h = 0; h < 60; ++h, t *= 0.5) {
      step_size = 0.0;
      for (int i = 0; i < n; ++i) {
        trial[i] = x[i] + t * factor * grad[i];
        step_size += (trial[i] - x[i]) * (trial[i] - x[i]);
      }
      const double tv = u.evaluate(trial, trial_grad);
      if (tv > value) {
        x = trial;
        grad = trial_grad;
        value = tv;
        moved = true;
        break;
      }
    }
    if (!moved || std::sqrt(step_size) <= 1e-14 * (scale + norm(x))) break;
  }
  return x;
}

kernel::BubbleParams max_point_guess(const FieldSampler& u, const Point& start) {
  kernel::BubbleParams p;
  p.xi = ascend_to_max(u, start);
  const double peak = u.value(p.xi);
  if (!(peak > 0.0)) throw DomainError("no positive maximum to start a fit from");
  p.lambda = std::pow(peak, -1.0 / u.dim().alpha);
  p.a = 0.0;
  return p;
}

}  // namespace blowup::decomposition
