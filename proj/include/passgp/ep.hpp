#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "passgp/kernels.hpp"

namespace passgp {

struct EPConfig {
  double tol = 1e-6;      ///< max |change| of site natural parameters over a sweep
  int max_sweeps = 50;
  double damping = 0.8;   ///< 1.0 = undamped
  std::uint64_t seed = 0; ///< drives the per-sweep site visiting order
};

/// Fitted EP approximation N(f | post_mean, post_cov) to a probit GP posterior.
///
/// Sites are stored in natural form: site_precision = 1/C~ and
/// site_nat_mean = m~/C~. A site that has never been updated has zero
/// precision (infinite variance). The factorization cache holds the Cholesky
/// factor of B = I + S^1/2 K S^1/2 with S = diag(site_precision), from which
/// (K + C~)^-1 = S^1/2 B^-1 S^1/2 is applied without ever forming C~.
struct EPState {
  Vector labels;
  Vector prior_mean;
  Vector site_precision;
  Vector site_nat_mean;
  Vector post_mean;
  Matrix post_cov;
  double log_z_ep = 0.0;
  int n_sweeps = 0;
  int n_skipped = 0;  ///< site updates rejected by the negative-variance guard
  bool converged = false;
  double jitter_added = 0.0;  ///< diagonal added to K after a failed factorization

  // factorization cache
  Vector sqrt_prec;
  Matrix chol_b;  ///< lower-triangular factor of B
  Vector alpha;   ///< (K + C~)^-1 (m~ - prior_mean)

  Eigen::Index size() const { return labels.size(); }
  Vector site_mean() const;
  Vector site_var() const;
};

struct CavityParams {
  double mean;
  double var;
};

struct PredictiveResult {
  double mean;
  double var;
  double prob;  ///< probability of the queried label
};

/// Zero-mean probit EP with sequential, randomly ordered, damped site updates.
EPState ep_fit(const Matrix& K, const Vector& y, const EPConfig& config = {});

/// EP under the prior N(f | prior_mean, K). Identical to ep_fit when the mean is zero.
EPState ep_fit_with_mean(const Matrix& K, const Vector& y, const Vector& prior_mean,
                         const EPConfig& config = {});

/// Rebuilds posterior, cache and log Z_EP from stored site parameters. ep_fit
/// finishes through this same path, so a restored state is bit-identical.
EPState ep_restore(const Matrix& K, const Vector& y, const Vector& site_precision,
                   const Vector& site_nat_mean, const Vector& prior_mean);

CavityParams cavity_parameters(const EPState& state, Eigen::Index n);

/// Phi(y_n m_\n / sqrt(1 + v_\n)).
double cavity_predictive(const EPState& state, Eigen::Index n, double y_n);

/// Probit predictive distribution at a query with cross-covariances k_star
/// (length N) and self-covariance k_ss.
PredictiveResult predict(const EPState& state, const Vector& k_star, double k_ss, double y_star);

/// Probit predictive for a batch: column j of K_star holds k* of query j.
std::vector<PredictiveResult> predict_batch(const EPState& state, const Matrix& K_star,
                                            const Vector& k_ss, double y_star = 1.0);

/// d log Z_EP / d log theta_k with the site parameters held fixed:
/// 1/2 a' dK a - 1/2 tr[(K + C~)^-1 dK], a = (K + C~)^-1 m~.
Vector log_ml_gradient(const EPState& state, std::span<const Matrix> K_grads);

/// (K + C~)^-1 as a dense matrix.
Matrix site_inverse(const EPState& state);

/// Zeroth, first and second moments of Phi(y f) N(f | mean, var).
struct TiltedMoments {
  double log_z;
  double mean;
  double var;
};
TiltedMoments probit_tilted_moments(double cavity_mean, double cavity_var, double y);

}  // namespace passgp
