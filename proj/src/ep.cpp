#include "passgp/ep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "passgp/errors.hpp"
#include "passgp/probit.hpp"

namespace passgp {
namespace {

void check_inputs(const Matrix& K, const Vector& y, const Vector& prior_mean) {
  if (K.rows() != K.cols()) throw InvalidArgument("ep: Gram matrix must be square");
  if (K.rows() != y.size()) throw InvalidArgument("ep: label count does not match Gram matrix");
  if (prior_mean.size() != y.size()) throw InvalidArgument("ep: prior mean has wrong length");
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y[i] != 1.0 && y[i] != -1.0) throw InvalidArgument("ep: labels must be +1 or -1");
  if (!K.allFinite()) throw InvalidArgument("ep: non-finite Gram matrix");
}

// K only needs to be positive semidefinite (the factored matrix is B, not K);
// reject clearly indefinite input up front.
void check_semidefinite(const Matrix& K) {
  if (K.rows() == 0) return;
  if (Eigen::LLT<Matrix>(K).info() == Eigen::Success) return;
  // Singular PSD matrices (duplicate inputs without jitter) fail LLT; decide on the spectrum.
  const double scale = std::max(K.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(K, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < -1e-8 * scale)
    throw FactorizationError("ep: Gram matrix is not positive semidefinite");
}

// Cholesky of B = I + S^1/2 K S^1/2. On failure the diagonal of K is boosted
// in decades up to 1e-4 * mean(diag K) before giving up.
Matrix factor_b(const Matrix& K, const Vector& sqrt_prec, double& jitter_added) {
  const Eigen::Index n = K.rows();
  const double scale = n > 0 ? std::max(K.diagonal().mean(), 1e-300) : 1.0;
  double boost = jitter_added;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Matrix B = sqrt_prec.asDiagonal() * K * sqrt_prec.asDiagonal();
    B.diagonal().array() += 1.0 + sqrt_prec.array().square() * boost;
    Eigen::LLT<Matrix> llt(B);
    if (llt.info() == Eigen::Success) {
      jitter_added = boost;
      return llt.matrixL();
    }
    boost = boost == 0.0 ? 1e-10 * scale : boost * 10.0;
    if (boost > 1e-4 * scale) break;
  }
  throw FactorizationError("ep: covariance not positive definite after jitter escalation");
}

EPState finalize(const Matrix& K_in, const Vector& y, const Vector& tau, const Vector& nu,
                 const Vector& prior_mean, double jitter_added) {
  const Eigen::Index n = K_in.rows();
  EPState st;
  st.labels = y;
  st.prior_mean = prior_mean;
  st.site_precision = tau;
  st.site_nat_mean = nu;
  st.sqrt_prec = tau.cwiseSqrt();
  st.chol_b = factor_b(K_in, st.sqrt_prec, jitter_added);
  st.jitter_added = jitter_added;
  Matrix K = K_in;
  if (jitter_added > 0.0) K.diagonal().array() += jitter_added;

  const auto L = st.chol_b.triangularView<Eigen::Lower>();
  // Sigma = K - V'V, V = L^-1 S^1/2 K
  Matrix V = st.sqrt_prec.asDiagonal() * K;
  L.solveInPlace(V);
  st.post_cov = K;
  st.post_cov.noalias() -= V.transpose() * V;

  const Vector p = nu - tau.cwiseProduct(prior_mean);
  Vector t = st.sqrt_prec.cwiseProduct(K * p);
  L.solveInPlace(t);
  st.chol_b.transpose().triangularView<Eigen::Upper>().solveInPlace(t);
  st.alpha = p - st.sqrt_prec.cwiseProduct(t);
  st.post_mean = prior_mean + K * st.alpha;

  const Vector v = st.post_cov.diagonal();
  const Vector tau_c = v.cwiseInverse() - tau;
  const Vector nu_c = st.post_mean.cwiseQuotient(v) - nu;
  double sum_lz = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(tau_c[i] > 0.0)) throw NumericalError("ep: non-positive cavity variance", i);
    const double m_c = nu_c[i] / tau_c[i];
    sum_lz += log_normal_cdf(y[i] * m_c / std::sqrt(1.0 + 1.0 / tau_c[i]));
  }
  const Vector q = nu_c - prior_mean.cwiseProduct(tau_c);
  const Vector ratio = tau.cwiseQuotient(tau_c);
  double log_det_half = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) log_det_half += std::log(st.chol_b(i, i));
  const double nlz = log_det_half - sum_lz - 0.5 * p.dot(st.post_cov * p) +
                     0.5 * v.dot(p.cwiseAbs2()) -
                     0.5 * q.dot((ratio.cwiseProduct(q) - 2.0 * p).cwiseProduct(v)) -
                     0.5 * ratio.array().log1p().sum();
  st.log_z_ep = -nlz;
  if (!std::isfinite(st.log_z_ep)) throw NumericalError("ep: non-finite log marginal likelihood");
  return st;
}

EPState run_ep(const Matrix& K, const Vector& y, const Vector& prior_mean, const EPConfig& cfg) {
  check_inputs(K, y, prior_mean);
  if (cfg.damping <= 0.0 || cfg.damping > 1.0) throw InvalidArgument("ep: damping must be in (0, 1]");
  if (cfg.max_sweeps < 1) throw InvalidArgument("ep: max_sweeps must be >= 1");
  check_semidefinite(K);
  const Eigen::Index n = K.rows();
  Vector tau = Vector::Zero(n);
  Vector nu = Vector::Zero(n);
  EPState st = finalize(K, y, tau, nu, prior_mean, 0.0);

  std::mt19937_64 rng(cfg.seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  int skipped = 0;
  Matrix sigma;
  Vector mean;
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    std::shuffle(order.begin(), order.end(), rng);
    sigma = st.post_cov;
    mean = st.post_mean;
    double max_change = 0.0;
    for (Eigen::Index i : order) {
      const double s_ii = sigma(i, i);
      const double tau_c = 1.0 / s_ii - tau[i];
      const double nu_c = mean[i] / s_ii - nu[i];
      if (!(tau_c > 0.0)) {
        ++skipped;
        continue;
      }
      const double m_c = nu_c / tau_c;
      const double v_c = 1.0 / tau_c;
      const double denom = std::sqrt(1.0 + v_c);
      const double z = y[i] * m_c / denom;
      const double r = inverse_mills(z);
      const double shrink = r * (z + r);  // in (0, 1) for the probit link
      const double s2_hat = v_c - v_c * v_c * shrink / (1.0 + v_c);
      // Both site parameters written without the 1/s2_hat - 1/v_c cancellation.
      const double tau_new = v_c * shrink / ((1.0 + v_c) * s2_hat);
      const double nu_new = m_c * tau_new + y[i] * v_c * r / (denom * s2_hat);
      if (!(s2_hat > 0.0) || !(tau_new > 0.0) || !std::isfinite(nu_new)) {
        if (!std::isfinite(z) || !std::isfinite(r)) throw NumericalError("ep: NaN in tilted moments", i);
        ++skipped;
        continue;
      }
      const double tau_d = cfg.damping * tau_new + (1.0 - cfg.damping) * tau[i];
      const double nu_d = cfg.damping * nu_new + (1.0 - cfg.damping) * nu[i];
      const double d_tau = tau_d - tau[i];
      max_change = std::max({max_change, std::abs(d_tau), std::abs(nu_d - nu[i])});
      // m - mu0 = Sigma p with p = nu - tau mu0; both change by rank one.
      const double delta = (nu_d - nu[i]) - d_tau * prior_mean[i];
      tau[i] = tau_d;
      nu[i] = nu_d;
      const double c = d_tau / (1.0 + d_tau * s_ii);
      // only the lower triangle of sigma is kept current inside a sweep
      Vector s(n);
      s.head(i) = sigma.row(i).head(i).transpose();
      s.tail(n - i) = sigma.col(i).tail(n - i);
      mean += (delta * (1.0 - c * s_ii) - c * (mean[i] - prior_mean[i])) * s;
      sigma.selfadjointView<Eigen::Lower>().rankUpdate(s, -c);
      if (!std::isfinite(mean[i])) throw NumericalError("ep: NaN in posterior mean", i);
    }
    st = finalize(K, y, tau, nu, prior_mean, st.jitter_added);
    st.n_sweeps = sweep;
    if (max_change < cfg.tol) {
      st.converged = true;
      break;
    }
  }
  st.n_skipped = skipped;
  return st;
}

}  // namespace

Vector EPState::site_mean() const { return site_nat_mean.cwiseQuotient(site_precision); }

Vector EPState::site_var() const { return site_precision.cwiseInverse(); }

TiltedMoments probit_tilted_moments(double cavity_mean, double cavity_var, double y) {
  const double denom = std::sqrt(1.0 + cavity_var);
  const double z = y * cavity_mean / denom;
  const double r = inverse_mills(z);
  return {log_normal_cdf(z), cavity_mean + y * cavity_var * r / denom,
          cavity_var - cavity_var * cavity_var * r * (z + r) / (1.0 + cavity_var)};
}

EPState ep_fit(const Matrix& K, const Vector& y, const EPConfig& config) {
  return run_ep(K, y, Vector::Zero(y.size()), config);
}

EPState ep_fit_with_mean(const Matrix& K, const Vector& y, const Vector& prior_mean,
                         const EPConfig& config) {
  return run_ep(K, y, prior_mean, config);
}

EPState ep_restore(const Matrix& K, const Vector& y, const Vector& site_precision,
                   const Vector& site_nat_mean, const Vector& prior_mean) {
  check_inputs(K, y, prior_mean);
  if (site_precision.size() != y.size() || site_nat_mean.size() != y.size())
    throw InvalidArgument("ep_restore: site parameter length mismatch");
  if ((site_precision.array() < 0.0).any()) throw InvalidArgument("ep_restore: negative site precision");
  EPState st = finalize(K, y, site_precision, site_nat_mean, prior_mean, 0.0);
  st.converged = true;
  return st;
}

CavityParams cavity_parameters(const EPState& state, Eigen::Index n) {
  if (n < 0 || n >= state.size()) throw InvalidArgument("cavity_parameters: index out of range");
  const double c_nn = state.post_cov(n, n);
  const double tau_c = 1.0 / c_nn - state.site_precision[n];
  if (!(tau_c > 0.0)) throw NumericalError("cavity variance not positive", n);
  const double v = 1.0 / tau_c;
  return {v * (state.post_mean[n] / c_nn - state.site_nat_mean[n]), v};
}

double cavity_predictive(const EPState& state, Eigen::Index n, double y_n) {
  const CavityParams c = cavity_parameters(state, n);
  return normal_cdf(y_n * c.mean / std::sqrt(1.0 + c.var));
}

PredictiveResult predict(const EPState& state, const Vector& k_star, double k_ss, double y_star) {
  if (k_star.size() != state.size()) throw InvalidArgument("predict: k_star has wrong length");
  const double mean = k_star.dot(state.alpha);
  Vector w = state.sqrt_prec.cwiseProduct(k_star);
  state.chol_b.triangularView<Eigen::Lower>().solveInPlace(w);
  double var = k_ss - w.squaredNorm();
  if (var <= -1e-8 * (1.0 + std::abs(k_ss)) || !std::isfinite(var))
    throw NumericalError("predict: non-positive predictive variance");
  var = std::max(var, 0.0);
  return {mean, var, normal_cdf(y_star * mean / std::sqrt(1.0 + var))};
}

std::vector<PredictiveResult> predict_batch(const EPState& state, const Matrix& K_star,
                                            const Vector& k_ss, double y_star) {
  if (K_star.rows() != state.size() || K_star.cols() != k_ss.size())
    throw InvalidArgument("predict_batch: shape mismatch");
  std::vector<PredictiveResult> out;
  out.reserve(static_cast<std::size_t>(K_star.cols()));
  for (Eigen::Index j = 0; j < K_star.cols(); ++j) {
    try {
      out.push_back(predict(state, K_star.col(j), k_ss[j], y_star));
    } catch (const NumericalError& e) {
      throw NumericalError(e.what(), j);
    }
  }
  return out;
}

Matrix site_inverse(const EPState& state) {
  Matrix W = state.sqrt_prec.asDiagonal().toDenseMatrix();
  state.chol_b.triangularView<Eigen::Lower>().solveInPlace(W);
  return W.transpose() * W;
}

Vector log_ml_gradient(const EPState& state, std::span<const Matrix> K_grads) {
  if (!state.converged) throw InvalidArgument("log_ml_gradient: EP state has not converged");
  const Matrix R = site_inverse(state);
  const Matrix outer = state.alpha * state.alpha.transpose() - R;
  Vector g(static_cast<Eigen::Index>(K_grads.size()));
  for (std::size_t k = 0; k < K_grads.size(); ++k) {
    if (K_grads[k].rows() != state.size() || K_grads[k].cols() != state.size())
      throw InvalidArgument("log_ml_gradient: gradient matrix has wrong shape");
    g[static_cast<Eigen::Index>(k)] = 0.5 * outer.cwiseProduct(K_grads[k]).sum();
  }
  return g;
}

}  // namespace passgp
