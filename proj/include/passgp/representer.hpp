#pragma once

#include "passgp/ep.hpp"

namespace passgp {

/// Representer weights of the posterior mean, post_mean = K alpha.
struct WeightVector {
  Vector alpha;        ///< y_n phi(z_n) / (Phi(z_n) sqrt(1 + v_\n)), from the cavities
  Vector alpha_solve;  ///< (K + C~)^-1 m~, from the factorization cache
  Vector z;            ///< y_n m_\n / sqrt(1 + v_\n)

  /// max |alpha - alpha_solve| / max(1, max |alpha_solve|)
  double path_discrepancy() const;
};

/// Both weight paths for a converged state. Throws InvalidArgument when the
/// state has not converged (the cavity path is only valid at a fixed point).
WeightVector weights(const EPState& state);

/// Weight a new point would receive, from the full predictive moments at it.
double predicted_weight(const EPState& state, const Vector& k_star, double k_ss, double y_star);

/// Large-z form exp(-z^2/2) / sqrt(2 pi (1 + v)), unsigned. Only valid for
/// z >= 4; smaller arguments throw InvalidArgument.
double asymptotic_weight(double z, double v);

/// Exact unsigned weight phi(z) / (Phi(z) sqrt(1 + v)).
double exact_weight(double z, double v);

}  // namespace passgp
