#pragma once

// Shared reference computations for the test suite. Each oracle is written
// independently of the library (closed forms, naive two-pass algorithms)
// so a shared bug between implementation and test is unlikely.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

// Closed-form long-run alarm rates of the one-sided sign accumulator with
// advance probability p, retreat pooling at zero, threshold tau in 1..4.
// Derived by eliminating the mean-absorption-time recurrence
//   mu_j = 1 + (1-p) mu_{max(j-1,0)} + p mu_{j+1},  mu_tau = 0
// by hand; the rate is 1/mu_0.
inline double closed_rate(int tau, double p) {
  switch (tau) {
    case 1:
      return p;
    case 2:
      return p * p / (1.0 + p);
    case 3:
      return p * p * p / (1.0 + 2.0 * p * p);
    case 4:
      return p * p * p * p / (1.0 - p + 2.0 * p * p + 2.0 * p * p * p);
    default:
      throw std::invalid_argument("closed_rate: tau outside 1..4");
  }
}

// Regularized lower incomplete gamma at a = 3/2 via the closed form
// P(3/2, x) = erf(sqrt(x)) - 2 sqrt(x) e^{-x} / sqrt(pi).
inline double reg_gamma_3_2(double x) {
  return std::erf(std::sqrt(x)) - 2.0 * std::sqrt(x) * std::exp(-x) / std::sqrt(std::acos(-1.0));
}

// Positive root of the scalar discrete Riccati fixed point
//   p = a^2 p + q - a^2 c^2 p^2 / (c^2 p + r),
// i.e. of c^2 p^2 + (r (1 - a^2) - q c^2) p - q r = 0.
inline double scalar_dare(double a, double c, double q, double r) {
  const double b = r * (1.0 - a * a) - q * c * c;
  return (-b + std::sqrt(b * b + 4.0 * c * c * q * r)) / (2.0 * c * c);
}

// Estimator trajectory under a constant alarm flag: the update
// alpha' = alpha + (zeta - alpha)/ell contracts geometrically toward zeta.
inline double mre_geometric(double alpha0, int zeta, int ell, long long k) {
  const double lam = 1.0 - 1.0 / static_cast<double>(ell);
  return zeta + (alpha0 - zeta) * std::pow(lam, static_cast<double>(k));
}

// Naive recount of a sliding-window alarm rate over the last min(n, ell)
// flags.
inline double window_recount(const std::vector<int>& flags, int ell) {
  if (flags.empty()) return 0.0;
  const std::size_t take =
      std::min(flags.size(), static_cast<std::size_t>(ell));
  long long sum = 0;
  for (std::size_t i = flags.size() - take; i < flags.size(); ++i) sum += flags[i];
  return static_cast<double>(sum) / static_cast<double>(take);
}

struct TwoPass {
  long long n = 0;
  double mean = 0.0;
  double var_population = 0.0;
  double var_sample = 0.0;
};

// Two-pass mean/variance.
inline TwoPass two_pass_moments(const std::vector<double>& xs) {
  TwoPass out;
  out.n = static_cast<long long>(xs.size());
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.var_population = ss / static_cast<double>(xs.size());
  out.var_sample = xs.size() > 1 ? ss / static_cast<double>(xs.size() - 1) : 0.0;
  return out;
}

}  // namespace oracle
