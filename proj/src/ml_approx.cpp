#include "passgp/ml_approx.hpp"

#include <chrono>
#include <cmath>

#include "passgp/errors.hpp"
#include "passgp/probit.hpp"

namespace passgp {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Matrix rows(const Matrix& X, const std::vector<Eigen::Index>& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), X.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(idx[i]);
  return out;
}

}  // namespace

std::vector<Eigen::Index> inactive_indices(Eigen::Index n, const std::vector<Eigen::Index>& active) {
  std::vector<Eigen::Index> out;
  std::size_t a = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a < active.size() && active[a] == i) {
      ++a;
      continue;
    }
    out.push_back(i);
  }
  return out;
}

ConditionalPrior conditional_prior(const ActiveSetModel& model, const Matrix& X_I) {
  ConditionalPrior cp;
  cp.cov = model.kernel.gram(X_I);
  if (model.size() == 0) {
    cp.mean = Vector::Zero(X_I.rows());
    return cp;
  }
  const Matrix K_AI = model.kernel.cross(model.features, X_I);
  cp.mean = K_AI.transpose() * model.state.alpha;
  Matrix W = model.state.sqrt_prec.asDiagonal() * K_AI;
  model.state.chol_b.triangularView<Eigen::Lower>().solveInPlace(W);
  cp.cov.noalias() -= W.transpose() * W;
  cp.cov.triangularView<Eigen::StrictlyLower>() = cp.cov.transpose().triangularView<Eigen::StrictlyLower>();
  return cp;
}

EPState ep_fit_nonzero_mean(const Matrix& K, const Vector& y, const Vector& prior_mean,
                            const EPConfig& config) {
  return ep_fit_with_mean(K, y, prior_mean, config);
}

double log_z_acc(const ActiveSetModel& model, const Matrix& X_I, const Vector& y_I,
                 const EPConfig& config, bool* boosted) {
  if (X_I.rows() != y_I.size()) throw InvalidArgument("log_z_acc: label count mismatch");
  if (X_I.rows() > kMaxInactiveForAcc)
    throw InvalidArgument("log_z_acc: inactive set too large for a full EP run");
  if (boosted) *boosted = false;
  if (X_I.rows() == 0) return model.state.log_z_ep;
  ConditionalPrior cp = conditional_prior(model, X_I);
  try {
    return model.state.log_z_ep + ep_fit_nonzero_mean(cp.cov, y_I, cp.mean, config).log_z_ep;
  } catch (const FactorizationError&) {
    // inactive points nearly interpolated by the active set
    cp.cov.diagonal().array() += 1e-8;
    if (boosted) *boosted = true;
    return model.state.log_z_ep + ep_fit_nonzero_mean(cp.cov, y_I, cp.mean, config).log_z_ep;
  }
}

double log_z_app(const ActiveSetModel& model, const Matrix& X_I, const Vector& y_I) {
  if (X_I.rows() != y_I.size()) throw InvalidArgument("log_z_app: label count mismatch");
  double total = model.state.log_z_ep;
  if (X_I.rows() == 0) return total;
  const auto preds = model.predict(X_I, 1.0, true);
  for (Eigen::Index i = 0; i < y_I.size(); ++i) {
    const auto& p = preds[static_cast<std::size_t>(i)];
    total += log_normal_cdf(y_I[i] * p.mean / std::sqrt(1.0 + p.var));
  }
  return total;
}

MLDecomposition decompose(const ActiveSetModel& model, const Matrix& X, const Vector& y, bool with_acc,
                          const EPConfig& config) {
  const auto inactive = inactive_indices(X.rows(), model.active_idx);
  const Matrix X_I = rows(X, inactive);
  Vector y_I(static_cast<Eigen::Index>(inactive.size()));
  for (std::size_t i = 0; i < inactive.size(); ++i) y_I[static_cast<Eigen::Index>(i)] = y[inactive[i]];

  MLDecomposition d;
  d.log_z_ep_a = model.state.log_z_ep;
  d.active_size = model.size();
  d.inactive_size = X_I.rows();
  auto t0 = Clock::now();
  d.log_z_app = log_z_app(model, X_I, y_I);
  d.seconds_app = seconds_since(t0);
  if (with_acc) {
    t0 = Clock::now();
    d.log_z_acc = log_z_acc(model, X_I, y_I, config, &d.acc_boosted);
    d.seconds_acc = seconds_since(t0);
  }
  return d;
}

}  // namespace passgp
