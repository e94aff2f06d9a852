#include "passgp/kernels.hpp"

#include <cmath>

#include "passgp/errors.hpp"

namespace passgp {
namespace {

void require_finite(const Matrix& X, const char* what) {
  if (!X.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite feature value");
}

bool has_jitter_slot(KernelFamily f) { return f != KernelFamily::Poly9; }

}  // namespace

std::string family_name(KernelFamily family) {
  switch (family) {
    case KernelFamily::SeJitter: return "se";
    case KernelFamily::SeJitterLinear: return "se-linear";
    case KernelFamily::Poly9: return "poly9";
  }
  return "unknown";
}

KernelFamily parse_family(const std::string& name) {
  if (name == "se") return KernelFamily::SeJitter;
  if (name == "se-linear") return KernelFamily::SeJitterLinear;
  if (name == "poly9") return KernelFamily::Poly9;
  throw InvalidArgument("unknown kernel family '" + name + "'");
}

int family_arity(KernelFamily family) {
  switch (family) {
    case KernelFamily::SeJitter: return 3;
    case KernelFamily::SeJitterLinear: return 4;
    case KernelFamily::Poly9: return 1;
  }
  return 0;
}

KernelSpec::KernelSpec(KernelFamily family, Vector log_theta, bool jitter_enabled, int degree)
    : family_(family),
      log_theta_(std::move(log_theta)),
      jitter_enabled_(jitter_enabled && has_jitter_slot(family)),
      degree_(degree) {
  if (log_theta_.size() != family_arity(family_))
    throw InvalidArgument("kernel " + family_name(family_) + " expects " +
                          std::to_string(family_arity(family_)) + " hyperparameters, got " +
                          std::to_string(log_theta_.size()));
  if (!log_theta_.allFinite()) throw InvalidArgument("non-finite log hyperparameter");
  if (degree_ < 1) throw InvalidArgument("polynomial degree must be >= 1");
  if (!jitter_enabled_ && has_jitter_slot(family_)) log_theta_[2] = 0.0;
}

KernelSpec KernelSpec::from_theta(KernelFamily family, const std::vector<double>& theta,
                                  int degree) {
  Vector log_theta(static_cast<Eigen::Index>(theta.size()));
  bool jitter = true;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    if (k == 2 && has_jitter_slot(family) && theta[k] == 0.0) {
      jitter = false;
      log_theta[2] = 0.0;
      continue;
    }
    if (!(theta[k] > 0.0)) throw InvalidArgument("hyperparameters must be strictly positive");
    log_theta[static_cast<Eigen::Index>(k)] = std::log(theta[k]);
  }
  return KernelSpec(family, log_theta, jitter, degree);
}

double KernelSpec::theta(Eigen::Index k) const {
  if (k == 2 && has_jitter_slot(family_) && !jitter_enabled_) return 0.0;
  return std::exp(log_theta_[k]);
}

double KernelSpec::jitter() const { return has_jitter_slot(family_) ? theta(2) : 0.0; }

std::vector<bool> KernelSpec::free_params() const {
  std::vector<bool> mask(static_cast<std::size_t>(n_params()), true);
  if (has_jitter_slot(family_) && !jitter_enabled_) mask[2] = false;
  return mask;
}

KernelSpec KernelSpec::with_log_theta(const Vector& log_theta) const {
  return KernelSpec(family_, log_theta, jitter_enabled_, degree_);
}

double KernelSpec::eval(const Eigen::Ref<const Vector>& xi, const Eigen::Ref<const Vector>& xj,
                        bool same_index) const {
  if (xi.size() != xj.size()) throw InvalidArgument("kernel_eval: dimension mismatch");
  if (!xi.allFinite() || !xj.allFinite())
    throw InvalidArgument("kernel_eval: non-finite feature value");
  double value = 0.0;
  switch (family_) {
    case KernelFamily::SeJitter:
    case KernelFamily::SeJitterLinear: {
      const double d2 = (xi - xj).squaredNorm();
      value = theta(0) * std::exp(-d2 / (2.0 * theta(1)));
      if (family_ == KernelFamily::SeJitterLinear) value += theta(3) * xi.dot(xj);
      if (same_index) value += jitter();
      break;
    }
    case KernelFamily::Poly9:
      value = theta(0) * std::pow(xi.dot(xj) + 1.0, degree_);
      break;
  }
  return value;
}

Matrix squared_distances(const Matrix& X1, const Matrix& X2) {
  const Vector n1 = X1.rowwise().squaredNorm();
  const Vector n2 = X2.rowwise().squaredNorm();
  Matrix d2 = -2.0 * (X1 * X2.transpose());
  d2.colwise() += n1;
  d2.rowwise() += n2.transpose();
  return d2.cwiseMax(0.0);
}

Matrix KernelSpec::base_cross(const Matrix& X1, const Matrix& X2, bool symmetric) const {
  if (X1.cols() != X2.cols()) throw InvalidArgument("kernel_matrix: dimension mismatch");
  require_finite(X1, "kernel_matrix");
  if (!symmetric) require_finite(X2, "kernel_matrix");
  Matrix K;
  switch (family_) {
    case KernelFamily::SeJitter:
    case KernelFamily::SeJitterLinear: {
      Matrix d2 = squared_distances(X1, X2);
      if (symmetric) d2.diagonal().setZero();
      K = theta(0) * (d2 / (-2.0 * theta(1))).array().exp().matrix();
      if (family_ == KernelFamily::SeJitterLinear) K += theta(3) * (X1 * X2.transpose());
      break;
    }
    case KernelFamily::Poly9:
      K = theta(0) * ((X1 * X2.transpose()).array() + 1.0).pow(degree_).matrix();
      break;
  }
  if (symmetric) {
    // Mirror the upper triangle so the result is exactly symmetric.
    K.triangularView<Eigen::StrictlyLower>() = K.transpose().triangularView<Eigen::StrictlyLower>();
  }
  return K;
}

Matrix KernelSpec::gram(const Matrix& X) const {
  Matrix K = base_cross(X, X, true);
  K.diagonal().array() += jitter();
  return K;
}

Matrix KernelSpec::cross(const Matrix& X1, const Matrix& X2) const {
  return base_cross(X1, X2, false);
}

Vector KernelSpec::self_covariance(const Matrix& X) const {
  require_finite(X, "self_covariance");
  Vector k(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) k[i] = eval(X.row(i).transpose(), X.row(i).transpose(), false);
  return k;
}

std::vector<Matrix> KernelSpec::gram_grads(const Matrix& X) const {
  require_finite(X, "kernel_matrix_grads");
  const Eigen::Index n = X.rows();
  std::vector<Matrix> grads;
  switch (family_) {
    case KernelFamily::SeJitter:
    case KernelFamily::SeJitterLinear: {
      Matrix d2 = squared_distances(X, X);
      d2.diagonal().setZero();
      d2.triangularView<Eigen::StrictlyLower>() = d2.transpose().triangularView<Eigen::StrictlyLower>();
      const Matrix k_se = theta(0) * (d2 / (-2.0 * theta(1))).array().exp().matrix();
      grads.push_back(k_se);
      grads.push_back(k_se.cwiseProduct(d2 / (2.0 * theta(1))));
      grads.push_back(jitter() * Matrix::Identity(n, n));
      if (family_ == KernelFamily::SeJitterLinear) {
        Matrix lin = X * X.transpose();
        lin.triangularView<Eigen::StrictlyLower>() = lin.transpose().triangularView<Eigen::StrictlyLower>();
        grads.push_back(theta(3) * lin);
      }
      break;
    }
    case KernelFamily::Poly9:
      grads.push_back(base_cross(X, X, true));
      break;
  }
  return grads;
}

}  // namespace passgp
