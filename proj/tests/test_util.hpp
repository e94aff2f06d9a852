#pragma once

#include <cmath>
#include <random>

#include "passgp/kernels.hpp"

namespace passgp::testing {

struct Instance {
  Matrix X;
  Vector y;
  KernelSpec kernel;
  Matrix K;
};

// Random SE-kernel classification problem: inputs uniform in [-2, 2]^dim,
// labels drawn from a sign of a smooth function plus label noise, moderate
// random hyperparameters.
inline Instance random_instance(int n, std::uint64_t seed, int dim = 2) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Matrix X(n, dim);
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < dim; ++d) X(i, d) = box(rng);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    double s = X(i, 0) + 0.5 * std::sin(2.0 * X.row(i).sum());
    if (u01(rng) < 0.1) s = -s;
    y[i] = s >= 0.0 ? 1.0 : -1.0;
  }
  const double sig = 0.5 + 1.5 * u01(rng);
  const double len2 = 0.3 + 1.7 * u01(rng);
  const double jit = std::exp(std::log(1e-3) + u01(rng) * std::log(100.0));
  KernelSpec k = KernelSpec::from_theta(KernelFamily::SeJitter, {sig, len2, jit});
  Matrix K = k.gram(X);
  return {X, y, k, K};
}

// Instance drawn from the probit-GP model itself: inputs uniform in [-2, 2]^2,
// theta1 in [0.5, 1], squared length-scale in [0.25, 1], jitter log-uniform in
// [1e-3, 1e-1], latent f ~ GP, y ~ Bernoulli(Phi(f)). One extra input (row n)
// is drawn as a test point. Used wherever EP is compared to exact quadrature.
struct ProbitInstance {
  Matrix X;  // n + 1 rows; the last is the test input
  Vector y;  // n labels
  KernelSpec kernel;
  Matrix K;  // n x n training Gram
  Vector k_star;
  double k_ss;
};

inline ProbitInstance probit_instance(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0), box(-2.0, 2.0);
  std::normal_distribution<double> g;
  Matrix X(n + 1, 2);
  for (int i = 0; i <= n; ++i)
    for (int d = 0; d < 2; ++d) X(i, d) = box(rng);
  const double sig = 0.5 + 0.5 * u01(rng);
  const double len2 = 0.25 + 0.75 * u01(rng);
  const double jit = std::exp(std::log(1e-3) + u01(rng) * std::log(100.0));
  KernelSpec k = KernelSpec::from_theta(KernelFamily::SeJitter, {sig, len2, jit});
  const Matrix full = k.gram(X);
  Vector z(n + 1);
  for (int i = 0; i <= n; ++i) z[i] = g(rng);
  const Vector f = full.llt().matrixL() * z;
  Vector y(n);
  for (int i = 0; i < n; ++i) y[i] = u01(rng) < 0.5 * std::erfc(-f[i] / std::sqrt(2.0)) ? 1.0 : -1.0;
  const Vector ks = k.cross(X.topRows(n), X.bottomRows(1)).col(0);
  const double kss = k.eval(X.row(n).transpose(), X.row(n).transpose(), false);
  return {X, y, k, full.topLeftCorner(n, n), ks, kss};
}

inline Matrix remove_index(const Matrix& M, Eigen::Index idx, bool rows_and_cols) {
  const Eigen::Index n = M.rows();
  Matrix out(n - 1, rows_and_cols ? n - 1 : M.cols());
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == idx) continue;
    if (rows_and_cols) {
      Eigen::Index c = 0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != idx) out(r, c++) = M(i, j);
    } else {
      out.row(r) = M.row(i);
    }
    ++r;
  }
  return out;
}

inline Vector remove_index(const Vector& v, Eigen::Index idx) {
  Vector out(v.size() - 1);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (i != idx) out[r++] = v[i];
  return out;
}

}  // namespace passgp::testing
