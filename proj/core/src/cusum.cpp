#include "cusign/cusum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cusign/errors.hpp"

namespace cusign {

void CusumConfig::validate() const {
  if (!(bias > 0.0)) throw InvalidArgumentError("CusumConfig: bias must be > 0");
  if (!(tau_c > 0.0)) throw InvalidArgumentError("CusumConfig: tau_c must be > 0");
  if (ell < 1) throw InvalidArgumentError("CusumConfig: ell must be >= 1");
  if (target_rate && !(*target_rate > 0.0 && *target_rate < 0.5)) {
    throw InvalidArgumentError("CusumConfig: target rate must lie in (0, 0.5)");
  }
}

CusumState::CusumState(int ell) : window(static_cast<std::size_t>(ell), 0) {
  if (ell < 1) throw InvalidArgumentError("CusumState: ell must be >= 1");
}

namespace {

void push_alarm(CusumState& state, bool alarm) {
  const std::uint8_t bit = alarm ? 1 : 0;
  state.window_sum += bit - state.window[static_cast<std::size_t>(state.head)];
  state.window[static_cast<std::size_t>(state.head)] = bit;
  state.head = (state.head + 1) % static_cast<int>(state.window.size());
  state.seen += 1;
  state.zeta_c = alarm;
}

}  // namespace

bool cusum_step(CusumState& state, const CusumConfig& cfg, double z) {
  bool alarm = false;
  if (state.c > cfg.tau_c) {
    // Carried-over exceedance (externally constructed state): reset with an
    // alarm without consuming z.
    state.c = 0.0;
    alarm = true;
  } else {
    const double c = std::max(0.0, state.c + z - cfg.bias);
    if (c > cfg.tau_c) {
      state.c = 0.0;
      alarm = true;
    } else {
      state.c = c;
    }
  }
  push_alarm(state, alarm);
  return alarm;
}

double windowed_alarm_rate(const CusumState& state) {
  if (state.seen == 0) return 0.0;
  const long long denom = std::min<long long>(state.seen,
                                              static_cast<long long>(state.window.size()));
  return static_cast<double>(state.window_sum) / static_cast<double>(denom);
}

double cusum_alarm_rate(const std::vector<double>& z, double bias, double tau_c) {
  if (z.empty()) throw InvalidArgumentError("cusum_alarm_rate: empty sample");
  double c = 0.0;
  long long alarms = 0;
  for (const double zi : z) {
    c = std::max(0.0, c + zi - bias);
    if (c > tau_c) {
      c = 0.0;
      ++alarms;
    }
  }
  return static_cast<double>(alarms) / static_cast<double>(z.size());
}

double tune_threshold(double bias, int s, double target_rate, Rng& rng, long long n_per_eval) {
  if (s < 1) throw InvalidArgumentError("tune_threshold: s must be >= 1");
  if (!(bias > static_cast<double>(s))) {
    throw InvalidArgumentError("tune_threshold: bias must exceed E[z] = s");
  }
  if (!(target_rate > 0.0 && target_rate < 0.5)) {
    throw InvalidArgumentError("tune_threshold: target rate must lie in (0, 0.5)");
  }
  n_per_eval = std::max<long long>(n_per_eval, 2'000'000);

  Rng sample_rng = rng.spawn(0);
  std::vector<double> z(static_cast<std::size_t>(n_per_eval));
  for (double& zi : z) zi = sample_rng.chi_square(s);

  constexpr double rate_tol = 5e-4;
  constexpr double width_tol = 0.02;
  constexpr double hi_cap = 1e3;

  if (cusum_alarm_rate(z, bias, 1e-6) < target_rate) {
    throw TuningFailureError("tune_threshold: target rate unreachable (above the rate at a vanishing threshold)");
  }
  double lo = 1e-6;
  double hi = 1.0;
  while (cusum_alarm_rate(z, bias, hi) > target_rate) {
    hi *= 2.0;
    if (hi > hi_cap) {
      throw TuningFailureError("tune_threshold: target rate unreachable below threshold 1e3");
    }
  }

  double best_mid = 0.5 * (lo + hi);
  double best_err = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double rate = cusum_alarm_rate(z, bias, mid);
    const double err = std::fabs(rate - target_rate);
    if (err < best_err) {
      best_err = err;
      best_mid = mid;
    }
    if (err <= rate_tol && (hi - lo) < width_tol) return mid;
    if (rate > target_rate) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-6) break;
  }
  if (best_err <= 2e-3) return best_mid;  // contract tolerance
  throw TuningFailureError("tune_threshold: bisection failed to reach the target rate");
}

}  // namespace cusign
