#pragma once

// Standard normal helpers that stay accurate deep in the lower tail, where
// probit EP routinely evaluates arguments beyond -8.

namespace passgp {

double normal_pdf(double z);
double log_normal_pdf(double z);
double normal_cdf(double z);
double log_normal_cdf(double z);

/// phi(z) / Phi(z). Uses a continued fraction for z < -6.
double inverse_mills(double z);

}  // namespace passgp
