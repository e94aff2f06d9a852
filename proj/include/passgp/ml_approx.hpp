#pragma once

#include <optional>
#include <vector>

#include "passgp/active_set.hpp"
#include "passgp/ep.hpp"

namespace passgp {

/// Prior over inactive latents given the active-set EP posterior:
/// mean = K_IA (K_AA + C~_AA)^-1 m~_A, cov = K_II - K_IA (K_AA + C~_AA)^-1 K_AI.
struct ConditionalPrior {
  Vector mean;
  Matrix cov;
};

struct MLDecomposition {
  double log_z_ep_a = 0.0;
  double log_z_app = 0.0;
  std::optional<double> log_z_acc;
  Eigen::Index active_size = 0;
  Eigen::Index inactive_size = 0;
  double seconds_app = 0.0;
  double seconds_acc = 0.0;
  bool acc_boosted = false;  ///< 1e-8 diagonal boost applied to the inactive prior
};

/// Inactive-block size above which log_z_acc refuses to run.
inline constexpr Eigen::Index kMaxInactiveForAcc = 2000;

/// X_I are training rows outside the active set (jitter applies to K_II).
ConditionalPrior conditional_prior(const ActiveSetModel& model, const Matrix& X_I);

/// EP under the prior N(f | prior_mean, K).
EPState ep_fit_nonzero_mean(const Matrix& K, const Vector& y, const Vector& prior_mean,
                            const EPConfig& config = {});

/// log Z_EP,A + log Z_EP(y_I | m_I|A, C_II|A).
double log_z_acc(const ActiveSetModel& model, const Matrix& X_I, const Vector& y_I,
                 const EPConfig& config = {}, bool* boosted = nullptr);

/// log Z_EP,A + sum_i log q(y_i | x_i, active set).
double log_z_app(const ActiveSetModel& model, const Matrix& X_I, const Vector& y_I);

/// All three terms for the split of (X, y) into the model's active set and its
/// complement. Skips Z_ACC when with_acc is false.
MLDecomposition decompose(const ActiveSetModel& model, const Matrix& X, const Vector& y,
                          bool with_acc = true, const EPConfig& config = {});

/// Indices of {0..n-1} not in the sorted active set.
std::vector<Eigen::Index> inactive_indices(Eigen::Index n, const std::vector<Eigen::Index>& active);

}  // namespace passgp
