#include "passgp/synthetic.hpp"

#include <cmath>
#include <random>

namespace passgp::synthetic {

Dataset two_gaussians(Eigen::Index n, std::uint64_t seed, double separation, double spread) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::bernoulli_distribution coin(0.5);
  Dataset ds;
  ds.name = "two_gaussians";
  ds.binary = true;
  ds.features.resize(n, 2);
  ds.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool pos = coin(rng);
    const double x = g(rng), y = g(rng);
    ds.features(i, 0) = pos ? 0.5 * separation + x : -0.5 * separation + spread * x;
    ds.features(i, 1) = y;
    ds.labels[i] = pos ? 1 : -1;
  }
  return ds;
}

Dataset two_moons(Eigen::Index n, std::uint64_t seed, double noise) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, noise);
  std::uniform_real_distribution<double> u(0.0, M_PI);
  std::bernoulli_distribution coin(0.5);
  Dataset ds;
  ds.name = "two_moons";
  ds.binary = true;
  ds.features.resize(n, 2);
  ds.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool pos = coin(rng);
    const double t = u(rng);
    ds.features(i, 0) = (pos ? std::cos(t) : 1.0 - std::cos(t)) + g(rng);
    ds.features(i, 1) = (pos ? std::sin(t) : 0.5 - std::sin(t)) + g(rng);
    ds.labels[i] = pos ? 1 : -1;
  }
  return ds;
}

Dataset blobs(Eigen::Index n, int n_classes, std::uint64_t seed, double radius) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> cls(0, n_classes - 1);
  Dataset ds;
  ds.name = "blobs";
  ds.features.resize(n, 2);
  ds.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = cls(rng);
    const double a = 2.0 * M_PI * c / n_classes;
    ds.features(i, 0) = radius * std::cos(a) + g(rng);
    ds.features(i, 1) = radius * std::sin(a) + g(rng);
    ds.labels[i] = c;
  }
  return ds;
}

}  // namespace passgp::synthetic
