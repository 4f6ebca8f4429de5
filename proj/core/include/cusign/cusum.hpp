#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cusign/rng.hpp"

namespace cusign {

struct CusumConfig {
  double bias = 0.0;    // drift subtracted each step; must exceed E[z] = s for stability
  double tau_c = 0.0;   // alarm threshold (> 0)
  int ell = 100;        // window for the conventional alarm-rate average
  std::optional<double> target_rate;  // desired long-run rate, when tuning

  void validate() const;
};

// Accumulator (never negative) plus a true ring buffer of the last `ell`
// alarm flags backing the conventional windowed alarm rate. The memoryless
// pseudo-window is deliberately NOT used here.
struct CusumState {
  explicit CusumState(int ell);

  double c = 0.0;
  bool zeta_c = false;
  long long seen = 0;

  std::vector<std::uint8_t> window;
  int head = 0;
  int window_sum = 0;
};

// One detector step. The accumulator adds z - bias with a floor at zero; an
// alarm resets it. The alarm fires on the same step the threshold is crossed
// (the tuned (bias, tau_c, rate) operating points are only consistent with
// same-step semantics; a one-step-delayed alarm lengthens every renewal cycle
// by one and deflates the rate to r/(1+r)). A state arriving with c already
// above tau_c — possible only if constructed externally — is reset with an
// alarm before consuming z.
bool cusum_step(CusumState& state, const CusumConfig& cfg, double z);

// Sliding-window mean of the alarm flags; before the buffer fills it divides
// by the number of samples seen (0 when nothing seen).
double windowed_alarm_rate(const CusumState& state);

// Long-run alarm fraction of a fresh detector streamed over `z`.
double cusum_alarm_rate(const std::vector<double>& z, double bias, double tau_c);

// Monte Carlo bisection for the threshold achieving `target_rate` under
// z ~ chi-square(s): one common random-number sample (n_per_eval draws, floor
// 2e6) is generated from a substream of `rng` and reused across evaluations,
// making the empirical rate a deterministic nonincreasing step function of
// tau_c. Stops once |rate - target| <= 5e-4 (comfortably inside the ±2e-3
// contract) with the bracket below 0.02 wide. Unreachable targets (bracket cap
// 1e3, or target above the rate at a vanishing threshold) raise
// TuningFailureError.
double tune_threshold(double bias, int s, double target_rate, Rng& rng,
                      long long n_per_eval = 2'000'000);

}  // namespace cusign
