#include "passgp/hyperopt.hpp"

#include <cmath>
#include <optional>

#include "passgp/errors.hpp"

namespace passgp {
namespace {

struct Evaluation {
  Vector x;
  double f;
  Vector g;  // zero on fixed parameters
};

class Objective {
 public:
  Objective(const Matrix& X, const Vector& y, const KernelSpec& base, const EPConfig& ep)
      : X_(X), y_(y), base_(base), ep_(ep), mask_(base.free_params()) {}

  std::optional<Evaluation> operator()(const Vector& x) {
    ++count_;
    try {
      const KernelSpec k = base_.with_log_theta(x);
      const EPState st = ep_fit(k.gram(X_), y_, ep_);
      if (!st.converged) return std::nullopt;
      const auto grads = k.gram_grads(X_);
      Vector g = log_ml_gradient(st, grads);
      for (std::size_t i = 0; i < mask_.size(); ++i)
        if (!mask_[i]) g[static_cast<Eigen::Index>(i)] = 0.0;
      if (!g.allFinite()) return std::nullopt;
      return Evaluation{x, st.log_z_ep, g};
    } catch (const NumericalError&) {
      return std::nullopt;
    }
  }

  int count() const { return count_; }

 private:
  const Matrix& X_;
  const Vector& y_;
  const KernelSpec& base_;
  EPConfig ep_;
  std::vector<bool> mask_;
  int count_ = 0;
};

Vector project(const Vector& x, const OptimizerConfig& opt) {
  return x.cwiseMax(opt.lower).cwiseMin(opt.upper);
}

// Gradient with components pointing out of the box removed.
Vector projected_gradient(const Evaluation& e, const OptimizerConfig& opt) {
  Vector g = e.g;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (e.x[i] <= opt.lower && g[i] < 0.0) g[i] = 0.0;
    if (e.x[i] >= opt.upper && g[i] > 0.0) g[i] = 0.0;
  }
  return g;
}

}  // namespace

OptimizeResult optimize(const Matrix& X, const Vector& y, const KernelSpec& kernel,
                        const OptimizerConfig& opt, const EPConfig& ep) {
  if (opt.max_evals < 1) throw InvalidArgument("optimize: max_evals must be >= 1");
  if (y.size() == 0 || (y.array() > 0).all() || (y.array() < 0).all())
    throw InvalidArgument("optimize: both classes must be present");

  Objective objective(X, y, kernel, ep);
  std::vector<OptimizerTraceEntry> trace;
  auto log_eval = [&](const Vector& x, const std::optional<Evaluation>& e, bool accepted) {
    trace.push_back({objective.count(), x, e ? e->f : std::nan(""),
                     e ? e->g.norm() : std::nan(""), accepted});
  };

  const Vector x0 = project(opt.warm_start ? kernel.log_theta() : Vector::Zero(kernel.n_params()), opt);
  auto first = objective(x0);
  log_eval(x0, first, first.has_value());
  if (!first) {
    return {kernel.with_log_theta(x0), std::nan(""), std::nan(""), objective.count(), true,
            std::move(trace)};
  }
  Evaluation best = *first;
  Vector g = projected_gradient(best, opt);
  Vector dir = g;
  double step = 1.0;
  bool warning = false;

  while (g.norm() >= opt.grad_tol && objective.count() < opt.max_evals) {
    bool accepted = false;
    // never try to move more than two nats in any coordinate at once
    double t = std::min(step, 2.0 / std::max(dir.cwiseAbs().maxCoeff(), 1e-300));
    while (objective.count() < opt.max_evals) {
      const Vector x_new = project(best.x + t * dir, opt);
      const Vector dx = x_new - best.x;
      if (dx.cwiseAbs().maxCoeff() < 1e-12) break;
      auto trial = objective(x_new);
      const bool ok = trial && trial->f >= best.f + opt.armijo * g.dot(dx);
      log_eval(x_new, trial, ok);
      if (ok) {
        const Vector g_new = projected_gradient(*trial, opt);
        const double beta = std::max(0.0, g_new.dot(g_new - g) / std::max(g.squaredNorm(), 1e-300));
        dir = g_new + beta * dir;
        if (dir.dot(g_new) <= 0.0) dir = g_new;
        best = *trial;
        g = g_new;
        step = 2.0 * t;
        accepted = true;
        break;
      }
      if (!trial) warning = true;
      t *= 0.5;
    }
    if (!accepted) break;  // line search failure or budget exhausted
  }

  return {kernel.with_log_theta(best.x), best.f, g.norm(), objective.count(), warning && best.x == x0,
          std::move(trace)};
}

}  // namespace passgp
