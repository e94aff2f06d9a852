#pragma once

// Test-only reference computations. Nothing here calls into the EP code path.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace passgp::oracle {

inline double Phi(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

struct GaussHermite {
  std::vector<double> nodes;    // for the N(0,1) weight
  std::vector<double> weights;  // sum to 1
};

// Golub-Welsch for the physicists' Hermite weight, rescaled to N(0,1).
inline GaussHermite gauss_hermite(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(i / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussHermite gh;
  for (int i = 0; i < n; ++i) {
    gh.nodes.push_back(std::sqrt(2.0) * es.eigenvalues()[i]);
    const double v0 = es.eigenvectors()(0, i);
    gh.weights.push_back(v0 * v0);
  }
  return gh;
}

// E[g(f)] for f ~ N(mean, cov) on a tensor Gauss-Hermite grid.
inline double gaussian_expectation(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                   int nodes_per_dim,
                                   const std::function<double(const Eigen::VectorXd&)>& g) {
  const int d = static_cast<int>(mean.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  const Eigen::MatrixXd T =
      es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  const GaussHermite gh = gauss_hermite(nodes_per_dim);
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  Eigen::VectorXd u(d), f(d);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (int k = 0; k < d; ++k) {
      u[k] = gh.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
      w *= gh.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
    }
    f.noalias() = mean + T * u;
    total += w * g(f);
    int k = 0;
    while (k < d && ++idx[static_cast<std::size_t>(k)] == nodes_per_dim) idx[static_cast<std::size_t>(k++)] = 0;
    if (k == d) break;
  }
  return total;
}

inline int default_nodes(int d) {
  if (d <= 2) return 60;
  if (d == 3) return 40;
  if (d == 4) return 26;
  if (d == 5) return 18;
  return 13;
}

// log of int N(f | mean, K) prod Phi(y_n f_n) df.
inline double log_z_quadrature(const Eigen::MatrixXd& K, const Eigen::VectorXd& y,
                               const Eigen::VectorXd& mean, int nodes = 0) {
  const int d = static_cast<int>(y.size());
  if (nodes == 0) nodes = default_nodes(d);
  return std::log(gaussian_expectation(mean, K, nodes, [&](const Eigen::VectorXd& f) {
    double p = 1.0;
    for (int i = 0; i < d; ++i) p *= Phi(y[i] * f[i]);
    return p;
  }));
}

// p(y* = +1 | y) for a query with cross-covariance k_star and self-covariance
// k_ss, integrating f* analytically given f.
inline double predictive_quadrature(const Eigen::MatrixXd& K, const Eigen::VectorXd& y,
                                    const Eigen::VectorXd& k_star, double k_ss, int nodes = 0) {
  const int d = static_cast<int>(y.size());
  if (nodes == 0) nodes = default_nodes(d);
  const Eigen::VectorXd a = K.ldlt().solve(k_star);
  const double s = k_ss - k_star.dot(a);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d);
  const double z = gaussian_expectation(zero, K, nodes, [&](const Eigen::VectorXd& f) {
    double p = 1.0;
    for (int i = 0; i < d; ++i) p *= Phi(y[i] * f[i]);
    return p;
  });
  const double zs = gaussian_expectation(zero, K, nodes, [&](const Eigen::VectorXd& f) {
    double p = Phi(a.dot(f) / std::sqrt(1.0 + s));
    for (int i = 0; i < d; ++i) p *= Phi(y[i] * f[i]);
    return p;
  });
  return zs / z;
}

// Central finite difference of a scalar function of a vector.
inline Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& fn,
                                          const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Eigen::VectorXd xp = x, xm = x;
    xp[k] += step;
    xm[k] -= step;
    g[k] = (fn(xp) - fn(xm)) / (2.0 * step);
  }
  return g;
}

}  // namespace passgp::oracle
