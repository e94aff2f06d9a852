#include "passgp/representer.hpp"

#include <cmath>

#include "passgp/errors.hpp"
#include "passgp/probit.hpp"

namespace passgp {

double WeightVector::path_discrepancy() const {
  if (alpha.size() == 0) return 0.0;
  const double scale = std::max(1.0, alpha_solve.cwiseAbs().maxCoeff());
  return (alpha - alpha_solve).cwiseAbs().maxCoeff() / scale;
}

double exact_weight(double z, double v) { return inverse_mills(z) / std::sqrt(1.0 + v); }

double asymptotic_weight(double z, double v) {
  if (z < 4.0) throw InvalidArgument("asymptotic_weight: only valid for z >= 4");
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI * (1.0 + v));
}

WeightVector weights(const EPState& state) {
  if (!state.converged) throw InvalidArgument("weights: EP state has not converged");
  const Eigen::Index n = state.size();
  WeightVector w;
  w.alpha.resize(n);
  w.z.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const CavityParams c = cavity_parameters(state, i);
    const double y = state.labels[i];
    w.z[i] = y * c.mean / std::sqrt(1.0 + c.var);
    w.alpha[i] = y * exact_weight(w.z[i], c.var);
  }
  w.alpha_solve = state.alpha;
  return w;
}

double predicted_weight(const EPState& state, const Vector& k_star, double k_ss, double y_star) {
  const PredictiveResult p = predict(state, k_star, k_ss, y_star);
  const double z = y_star * p.mean / std::sqrt(1.0 + p.var);
  return y_star * exact_weight(z, p.var);
}

}  // namespace passgp
