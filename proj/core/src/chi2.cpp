#include "cusign/chi2.hpp"

#include <cmath>

#include "cusign/errors.hpp"

namespace cusign {

namespace {

// P(a, x) by series: gamma(a,x) = e^{-x} x^a sum_n x^n / (a (a+1) ... (a+n)).
double gamma_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 1000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by modified Lentz continued fraction; returns the upper tail.
double gamma_cont_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double reg_lower_gamma(double a, double x) {
  if (!(a > 0.0)) throw InvalidArgumentError("reg_lower_gamma: a must be > 0");
  if (x < 0.0) throw InvalidArgumentError("reg_lower_gamma: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_cont_fraction(a, x);
}

double median_reference(int s) {
  if (s < 1) throw InvalidArgumentError("median_reference: s must be >= 1");
  const double t = 1.0 - 2.0 / (9.0 * static_cast<double>(s));
  return static_cast<double>(s) * t * t * t;
}

std::pair<double, double> sign_probabilities(int s, double z_ref) {
  if (s < 1) throw InvalidArgumentError("sign_probabilities: s must be >= 1");
  if (!(z_ref > 0.0)) throw InvalidArgumentError("sign_probabilities: z_ref must be > 0");
  const double p_minus = reg_lower_gamma(0.5 * s, 0.5 * z_ref);
  return {p_minus, 1.0 - p_minus};
}

std::pair<double, double> sign_probabilities(const ChiSquareContext& ctx) {
  return sign_probabilities(ctx.s, ctx.z_ref);
}

ChiSquareContext make_chi_square_context(int s, double z_ref,
                                         std::optional<double> threshold) {
  auto [pm, pp] = sign_probabilities(s, z_ref);
  return ChiSquareContext{s, z_ref, pm, pp, threshold};
}

double test_measure(const Vec& r, const Mat& sigma_inv) {
  if (sigma_inv.rows() != sigma_inv.cols() || sigma_inv.rows() != r.size()) {
    throw DimensionError("test_measure: residual/weight dimensions mismatch");
  }
  const double z = r.dot(sigma_inv * r);
  if (z < -1e-12) {
    throw InvalidArgumentError("test_measure: weight matrix is not PSD (z < -1e-12)");
  }
  return z < 0.0 ? 0.0 : z;
}

bool chi2_threshold_alarm(double z, double threshold) {
  if (!(threshold > 0.0)) throw InvalidArgumentError("chi2_threshold_alarm: threshold must be > 0");
  return z > threshold;
}

}  // namespace cusign
