#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace passgp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class KernelFamily {
  SeJitter,        ///< theta1 exp(-|xi-xj|^2 / (2 theta2)) + theta3 delta_ij
  SeJitterLinear,  ///< SeJitter + theta4 xi.xj
  Poly9,           ///< theta1 (xi.xj + 1)^degree, degree fixed at 9 by default
};

std::string family_name(KernelFamily family);
KernelFamily parse_family(const std::string& name);
int family_arity(KernelFamily family);

/// Covariance family plus log-domain hyperparameters. Immutable; every
/// mutation produces a new spec. The jitter term (log_theta[2] of the SE
/// families) can be switched off entirely, in which case theta3 == 0 and the
/// parameter is excluded from optimization.
class KernelSpec {
 public:
  KernelSpec(KernelFamily family, Vector log_theta, bool jitter_enabled = true,
             int degree = 9);

  /// Builds from linear-domain values. A zero jitter entry disables jitter.
  static KernelSpec from_theta(KernelFamily family, const std::vector<double>& theta,
                               int degree = 9);

  KernelFamily family() const { return family_; }
  const Vector& log_theta() const { return log_theta_; }
  bool jitter_enabled() const { return jitter_enabled_; }
  int degree() const { return degree_; }
  Eigen::Index n_params() const { return log_theta_.size(); }

  double theta(Eigen::Index k) const;
  double jitter() const;

  /// Mask of hyperparameters that are free to optimize.
  std::vector<bool> free_params() const;

  KernelSpec with_log_theta(const Vector& log_theta) const;

  /// k(xi, xj); the jitter term is added only when same_index is true.
  double eval(const Eigen::Ref<const Vector>& xi, const Eigen::Ref<const Vector>& xj,
              bool same_index) const;

  /// Symmetric training Gram matrix over the rows of X, jitter on the diagonal.
  Matrix gram(const Matrix& X) const;

  /// Cross-covariance between rows of X1 and rows of X2. Never jittered.
  Matrix cross(const Matrix& X1, const Matrix& X2) const;

  /// Jitter-free covariance of each row with itself (k** for test queries).
  Vector self_covariance(const Matrix& X) const;

  /// dK/dlog(theta_k) for each hyperparameter, over the training rows of X.
  std::vector<Matrix> gram_grads(const Matrix& X) const;

 private:
  Matrix base_cross(const Matrix& X1, const Matrix& X2, bool symmetric) const;

  KernelFamily family_;
  Vector log_theta_;
  bool jitter_enabled_;
  int degree_;
};

/// Squared distances between rows via |a|^2 + |b|^2 - 2 a.b, clamped at zero.
Matrix squared_distances(const Matrix& X1, const Matrix& X2);

}  // namespace passgp
