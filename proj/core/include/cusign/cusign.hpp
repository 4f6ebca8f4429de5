#pragma once

#include <utility>

#include "cusign/linalg.hpp"

namespace cusign {

// Which one-sided accumulator an absorbing-chain computation refers to.
enum class AccumCase { plus, minus };

struct CusignConfig {
  int tau = 2;             // alarm threshold (integer >= 1)
  double z_ref = 0.0;      // reference point for the sign of z
  double p_plus = 0.5;     // P(z > z_ref)
  double p_minus = 0.5;    // P(z < z_ref)
  int ell = 100;           // pseudo-window length (>= 10, table validity range)
  double z_confidence = 3.0;  // bound multiplier Z

  void validate() const;
};

// Post-step invariants: 0 <= s_plus < tau and -tau < s_minus <= 0 (reaching
// +/-tau alarms and resets within the step); alpha estimates stay in [0, 1].
struct CusignState {
  int s_plus = 0;
  int s_minus = 0;
  double alpha_hat_plus = 0.0;
  double alpha_hat_minus = 0.0;
  bool zeta_plus = false;
  bool zeta_minus = false;
};

// Three-way sign of z against the reference (exact comparison; the tie has
// probability zero for continuous z and contributes no movement).
int sign_of(double z, double z_ref);

// Memoryless run-time estimator: alpha' = alpha + (zeta - alpha)/ell.
// A Welford-style mean update with the divisor frozen at the pseudo-window
// length, so old alarms decay geometrically instead of being stored.
double mre_update(double alpha_hat, int zeta, int ell);

// Advances both accumulators by a precomputed sign in {-1, 0, +1} and applies
// the MRE update to both alarm-rate estimates. Semantics: accumulate, then if
// the accumulated value reaches +/-tau, emit the alarm and reset to zero on
// the same step. Returns (zeta_plus, zeta_minus).
std::pair<bool, bool> cusign_step_sign(CusignState& state, const CusignConfig& cfg, int sgn);

// Full step from a raw test measure.
std::pair<bool, bool> cusign_step(CusignState& state, const CusignConfig& cfg, double z);

// Transition matrix of the absorbing Markov chain over accumulator values
// 0..tau (last state absorbing). Advance probability is p_plus for the
// positive accumulator and p_minus for the negative one; the complementary
// mass retreats toward (and pools at) zero.
Mat transition_matrix(int tau, double p_plus, double p_minus, AccumCase which);

// Expected long-run alarm rate: with R the transient restriction of the
// transition matrix, solve (I - R) mu = 1; the rate is 1 / mu_1 (reciprocal
// mean absorption time from the reset state).
double expected_alarm_rate(int tau, double p_plus, double p_minus, AccumCase which);

// Empirical variance-scaling table for the MRE estimate:
// theta = c_tau * ell / (2 ell - 1), c = {1, 0.74, 0.70, 0.69} for tau = 1..4,
// valid for ell >= 10. Thresholds outside the table raise
// UnsupportedThresholdError (supply a custom theta instead).
double theta_scale(int tau, int ell);

struct AlarmRateBounds {
  double expected = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double theta = 0.0;
};

// E[alpha] +/- Z * sqrt(theta * E (1-E) / ell), lower bound clamped at 0.
AlarmRateBounds detection_bounds(double expected_rate, int tau, int ell, double z_confidence);
AlarmRateBounds detection_bounds_with_theta(double expected_rate, double theta, int ell,
                                            double z_confidence);

// Detection on strictly exiting the band.
bool monitor(double alpha_hat, const AlarmRateBounds& bounds);

}  // namespace cusign
