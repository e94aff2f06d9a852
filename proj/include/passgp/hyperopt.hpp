#pragma once

#include <vector>

#include "passgp/ep.hpp"
#include "passgp/kernels.hpp"

namespace passgp {

struct OptimizerConfig {
  int max_evals = 20;      ///< objective evaluations per optimize() call
  double grad_tol = 1e-4;  ///< stop when the projected gradient norm falls below
  double armijo = 1e-4;    ///< sufficient-increase constant
  double lower = -10.0;    ///< box on log hyperparameters
  double upper = 10.0;
  bool warm_start = true;  ///< start from the incoming theta (otherwise from zeros)
};

struct OptimizerTraceEntry {
  int eval;
  Vector log_theta;
  double log_z;
  double grad_norm;
  bool accepted;
};

struct OptimizeResult {
  KernelSpec kernel;
  double log_z;
  double grad_norm;
  int n_evals;
  bool warning;  ///< EP failed persistently; kernel is the best point seen
  std::vector<OptimizerTraceEntry> trace;
};

/// Maximizes log Z_EP(theta, X, y) over the free log hyperparameters with
/// Polak-Ribiere conjugate gradient ascent and a projected backtracking line
/// search. Every evaluation is a fresh EP fit; the accepted objective never
/// decreases.
OptimizeResult optimize(const Matrix& X, const Vector& y, const KernelSpec& kernel,
                        const OptimizerConfig& opt = {}, const EPConfig& ep = {});

}  // namespace passgp
