#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cusign/attack.hpp"
#include "cusign/cusign.hpp"
#include "cusign/cusum.hpp"
#include "cusign/ugv.hpp"

namespace cusign {

// Closed-loop case study configuration: vehicle + noise + detectors + attack.
// z_ref defaults to the chi-square median approximation for s = 3; an explicit
// override switches the detector design point to the effective probabilities
// implied by that reference (see run_scenario notes).
struct ScenarioConfig {
  std::uint64_t seed = 1;
  double duration_s = 200.0;
  double side_m = 5.0;
  double cruise_mps = 0.5;

  UgvParams ugv;
  ControllerParams controller;
  std::array<double, 3> q_diag = {1e-4, 1e-5, 1e-4};
  std::array<double, 3> r_diag = {1e-3, 1e-3, 1e-3};

  int cusign_tau = 2;
  int cusign_ell = 100;
  double cusign_z = 3.0;
  bool z_ref_auto = true;
  double z_ref_value = 0.0;     // used when z_ref_auto is false
  double cusign_theta = 0.0;    // optional custom theta (> 0 activates it)

  double cusum_bias = 3.3;
  double cusum_threshold = 2.3226;
  int cusum_ell = 100;
  double cusum_target_rate = 0.15;

  AttackSpec attack;

  void validate() const;
};

// One row per step; post-step accumulator states are recorded (S± read 0 on
// the step they alarmed — the alarms live in the zeta columns).
struct StepRecord {
  long long k = 0;
  double t = 0.0;
  std::array<double, 3> x{}, xhat{}, y{}, xi{}, r{};
  double z = 0.0;
  int s_plus = 0, s_minus = 0;
  int zeta_plus = 0, zeta_minus = 0;
  double alpha_plus = 0.0, alpha_minus = 0.0;
  double c = 0.0;
  int zeta_c = 0;
  double alpha_c = 0.0;
  int cusign_detect = 0, cusum_detect = 0;
};

struct ScenarioSummary {
  long long steps = 0;
  long long warmup = 0;           // 5 * ell steps excluded from detection accounting
  double z_ref = 0.0;
  double p_plus_eff = 0.0, p_minus_eff = 0.0;  // from sign_probabilities(z_ref)
  bool bounds_approximate = false;             // |p_plus - 0.5| > 0.05 at the design point
  AlarmRateBounds bounds_plus, bounds_minus;
  double cusum_band_lo = 0.0, cusum_band_hi = 0.0;

  long long attack_onset = -1;    // -1 when no attack scheduled
  long long first_cusign_detect = -1;  // first post-warmup flagged step
  long long first_cusum_detect = -1;
  long long cusign_detect_steps = 0;
  long long cusum_detect_steps = 0;
  long long post_warmup_steps = 0;
  double detection_free_fraction = 1.0;
  double max_c_post_onset = 0.0;

  double final_alpha_plus = 0.0, final_alpha_minus = 0.0, final_alpha_c = 0.0;

  std::vector<long long> capture_steps;
  std::vector<int> capture_corners;
};

struct ScenarioTrace {
  std::vector<StepRecord> records;
  ScenarioSummary summary;
};

// Runs the full loop: plant step with scheduled attack -> measurement ->
// filter residual -> test measure -> sign-accumulator and CUSUM updates ->
// estimator/windowed alarm rates -> detection flags -> waypoint controller.
// The vehicle starts at the first corner of the square at cruise speed with
// the estimator initialized to the true state; true pose integrates the true
// (v, theta) while the controller dead-reckons from the estimates.
//
// Detection bands: with the automatic reference point the expected alarm rate
// and bounds are evaluated at the design probabilities (0.5, 0.5) the
// reference is chosen to induce; an explicit z_ref uses the effective
// probabilities instead. The windowed-CUSUM flag is one-sided: it trips only
// above the band (a stealthy cancellation starves the window of alarms, which
// is not an excess-alarm detection).
ScenarioTrace run_scenario(const ScenarioConfig& cfg);

}  // namespace cusign
