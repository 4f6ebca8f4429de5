#pragma once

#include <optional>
#include <utility>

#include "cusign/linalg.hpp"

namespace cusign {

// Degrees of freedom, reference point splitting the chi-square mass into the
// two sign regions, and (optionally) a fixed threshold for the baseline
// exceedance detector.
struct ChiSquareContext {
  int s = 0;
  double z_ref = 0.0;
  double p_minus = 0.0;
  double p_plus = 0.0;
  std::optional<double> threshold;
};

// Regularized lower incomplete gamma P(a, x), dependency-free: power series
// for x < a + 1, Lentz continued fraction for the upper tail otherwise.
// Absolute error below 1e-10 over the supported domain.
double reg_lower_gamma(double a, double x);

// Cube-approximation of the chi-square median with s degrees of freedom:
// s * (1 - 2/(9s))^3. Kept as the approximation by design; the exact quantile
// is deliberately not substituted.
double median_reference(int s);

// (p_minus, p_plus) with p_minus = P(s/2, z_ref/2).
std::pair<double, double> sign_probabilities(int s, double z_ref);
std::pair<double, double> sign_probabilities(const ChiSquareContext& ctx);

// Builds a context with the sign probabilities filled in.
ChiSquareContext make_chi_square_context(int s, double z_ref,
                                         std::optional<double> threshold = std::nullopt);

// Quadratic test measure z = r' * sigma_inv * r (>= 0; tiny negative rounding
// is clamped, anything below -1e-12 indicates a non-PSD weight and throws).
double test_measure(const Vec& r, const Mat& sigma_inv);

// Baseline detector: alarm iff z > threshold (no alarm at equality).
bool chi2_threshold_alarm(double z, double threshold);

}  // namespace cusign
