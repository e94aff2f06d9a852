#include "passgp/probit.hpp"

#include <cmath>

namespace passgp {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kTailSwitch = -6.0;

// Mills ratio (1 - Phi(x)) / phi(x) for x >= 6, via the Laplace continued
// fraction 1/(x + 1/(x + 2/(x + 3/(x + ...)))).
double mills_ratio(double x) {
  double t = x;
  for (int k = 80; k >= 1; --k) t = x + k / t;
  return 1.0 / t;
}

}  // namespace

double log_normal_pdf(double z) { return -0.5 * z * z - kLogSqrt2Pi; }

double normal_pdf(double z) { return std::exp(log_normal_pdf(z)); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double log_normal_cdf(double z) {
  if (z > 0.0) return std::log1p(-0.5 * std::erfc(z * kInvSqrt2));
  if (z > kTailSwitch) return std::log(0.5 * std::erfc(-z * kInvSqrt2));
  return log_normal_pdf(z) + std::log(mills_ratio(-z));
}

double inverse_mills(double z) {
  if (z > kTailSwitch) return normal_pdf(z) / normal_cdf(z);
  return 1.0 / mills_ratio(-z);
}

}  // namespace passgp
