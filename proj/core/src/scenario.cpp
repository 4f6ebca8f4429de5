#include "cusign/scenario.hpp"

#include <cmath>

#include "cusign/chi2.hpp"
#include "cusign/errors.hpp"

namespace cusign {

void ScenarioConfig::validate() const {
  if (!(duration_s > 0.0)) throw InvalidArgumentError("ScenarioConfig: duration must be > 0");
  if (!(side_m > 0.0)) throw InvalidArgumentError("ScenarioConfig: side length must be > 0");
  if (!(cruise_mps > 0.0)) throw InvalidArgumentError("ScenarioConfig: cruise speed must be > 0");
  ugv.validate();
  controller.validate();
  if (cusign_tau < 1) throw InvalidArgumentError("ScenarioConfig: cusign tau must be >= 1");
  if (cusign_ell < 10) throw InvalidArgumentError("ScenarioConfig: cusign ell must be >= 10");
  if (!(cusign_z >= 0.0)) throw InvalidArgumentError("ScenarioConfig: cusign Z must be >= 0");
  if (!z_ref_auto && !(z_ref_value > 0.0)) {
    throw InvalidArgumentError("ScenarioConfig: explicit z_ref must be > 0");
  }
  if (cusign_theta < 0.0) {
    throw InvalidArgumentError("ScenarioConfig: custom theta must be >= 0 (0 means table lookup)");
  }
  if (!(cusum_bias > 0.0)) throw InvalidArgumentError("ScenarioConfig: cusum bias must be > 0");
  if (!(cusum_threshold > 0.0)) throw InvalidArgumentError("ScenarioConfig: cusum threshold must be > 0");
  if (cusum_ell < 1) throw InvalidArgumentError("ScenarioConfig: cusum ell must be >= 1");
  if (!(cusum_target_rate > 0.0 && cusum_target_rate < 0.5)) {
    throw InvalidArgumentError("ScenarioConfig: cusum target rate must lie in (0, 0.5)");
  }
  attack.validate(3);
  for (double qi : q_diag) {
    if (qi < 0.0) throw InvalidArgumentError("ScenarioConfig: Q diagonal must be >= 0");
  }
  for (double ri : r_diag) {
    if (!(ri > 0.0)) throw InvalidArgumentError("ScenarioConfig: R diagonal must be > 0");
  }
}

namespace {

Mat diag3(const std::array<double, 3>& d) {
  Mat m = Mat::Zero(3, 3);
  for (int i = 0; i < 3; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  return m;
}

}  // namespace

ScenarioTrace run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();

  const SystemModel model = build_ugv_model(cfg.ugv, diag3(cfg.q_diag), diag3(cfg.r_diag));
  EstimatorState est = solve_steady_state(model);

  // Detector configuration. The automatic reference point is designed to make
  // the sign probabilities 0.5, so the expected rate/bounds use that design
  // point; an explicit reference uses its effective probabilities.
  const double z_ref = cfg.z_ref_auto ? median_reference(model.s) : cfg.z_ref_value;
  const auto [pm_eff, pp_eff] = sign_probabilities(model.s, z_ref);
  const double p_plus = cfg.z_ref_auto ? 0.5 : pp_eff;
  const double p_minus = cfg.z_ref_auto ? 0.5 : pm_eff;

  CusignConfig ccfg;
  ccfg.tau = cfg.cusign_tau;
  ccfg.z_ref = z_ref;
  ccfg.p_plus = p_plus;
  ccfg.p_minus = p_minus;
  ccfg.ell = cfg.cusign_ell;
  ccfg.z_confidence = cfg.cusign_z;
  ccfg.validate();

  const double e_plus = expected_alarm_rate(ccfg.tau, p_plus, p_minus, AccumCase::plus);
  const double e_minus = expected_alarm_rate(ccfg.tau, p_plus, p_minus, AccumCase::minus);
  const double theta = cfg.cusign_theta > 0.0 ? cfg.cusign_theta
                                              : theta_scale(ccfg.tau, ccfg.ell);
  const AlarmRateBounds bounds_plus =
      detection_bounds_with_theta(e_plus, theta, ccfg.ell, ccfg.z_confidence);
  const AlarmRateBounds bounds_minus =
      detection_bounds_with_theta(e_minus, theta, ccfg.ell, ccfg.z_confidence);

  CusumConfig cucfg;
  cucfg.bias = cfg.cusum_bias;
  cucfg.tau_c = cfg.cusum_threshold;
  cucfg.ell = cfg.cusum_ell;
  cucfg.target_rate = cfg.cusum_target_rate;
  cucfg.validate();
  const double cusum_sd = std::sqrt(cfg.cusum_target_rate * (1.0 - cfg.cusum_target_rate) /
                                    static_cast<double>(cfg.cusum_ell));
  const double cusum_lo = std::max(0.0, cfg.cusum_target_rate - 3.0 * cusum_sd);
  const double cusum_hi = cfg.cusum_target_rate + 3.0 * cusum_sd;

  const long long steps = static_cast<long long>(std::llround(cfg.duration_s / cfg.ugv.ts));
  const long long warmup = 5LL * ccfg.ell;

  ScenarioTrace trace;
  trace.records.reserve(static_cast<std::size_t>(steps));
  ScenarioSummary& sum = trace.summary;
  sum.steps = steps;
  sum.warmup = warmup;
  sum.z_ref = z_ref;
  sum.p_plus_eff = pp_eff;
  sum.p_minus_eff = pm_eff;
  sum.bounds_approximate = std::fabs(p_plus - 0.5) > 0.05;
  sum.bounds_plus = bounds_plus;
  sum.bounds_minus = bounds_minus;
  sum.cusum_band_lo = cusum_lo;
  sum.cusum_band_hi = cusum_hi;
  sum.attack_onset = cfg.attack.kind == AttackKind::none ? -1 : cfg.attack.onset;

  // Square corners, counterclockwise from the origin; the vehicle starts at
  // corner 0 heading along +x toward corner 1, already at cruise speed, with
  // the estimator initialized to the true state.
  const std::array<Eigen::Vector2d, 4> corners = {
      Eigen::Vector2d{0.0, 0.0}, Eigen::Vector2d{cfg.side_m, 0.0},
      Eigen::Vector2d{cfg.side_m, cfg.side_m}, Eigen::Vector2d{0.0, cfg.side_m}};
  int goal_index = 1;

  Rng rng(cfg.seed);
  Vec x(3);
  x << cfg.cruise_mps, 0.0, 0.0;
  est.xhat = x;
  Eigen::Vector2d pose_true = corners[0];
  Eigen::Vector2d pose_est = corners[0];

  CusignState cstate;
  CusumState custate(cucfg.ell);

  for (long long k = 0; k < steps; ++k) {
    // Fixed noise order (process, then measurement) keeps traces bit-equal
    // across attack configurations until onset.
    const Vec nu = draw_noise(model.chol_q, rng);
    const Vec eta = draw_noise(model.chol_r, rng);
    const Vec y_clean = model.C * x + eta;
    const AttackerView view{y_clean, model.C * est.xhat};
    const Vec xi = apply_attack(cfg.attack, view, est, k);
    const Vec y = y_clean + xi;

    const Vec u = waypoint_force(est.xhat, pose_est, corners[static_cast<std::size_t>(goal_index)],
                                 cfg.cruise_mps, cfg.ugv, cfg.controller);

    StepRecord rec;
    rec.k = k;
    rec.t = static_cast<double>(k) * cfg.ugv.ts;
    for (int i = 0; i < 3; ++i) {
      rec.x[static_cast<std::size_t>(i)] = x(i);
      rec.xhat[static_cast<std::size_t>(i)] = est.xhat(i);
      rec.y[static_cast<std::size_t>(i)] = y(i);
      rec.xi[static_cast<std::size_t>(i)] = xi(i);
    }

    const double vhat_k = est.xhat(0);
    const double thhat_k = est.xhat(1);
    const Vec r = kf_step(est, model, u, y);  // advances xhat to k+1
    const double z = test_measure(r, est.SigmaInv);
    cusign_step(cstate, ccfg, z);
    const bool zeta_c = cusum_step(custate, cucfg, z);
    const double alpha_c = windowed_alarm_rate(custate);

    const bool cusign_detect =
        monitor(cstate.alpha_hat_plus, bounds_plus) || monitor(cstate.alpha_hat_minus, bounds_minus);
    const bool cusum_detect = alpha_c > cusum_hi;  // one-sided: excess alarms only

    for (int i = 0; i < 3; ++i) rec.r[static_cast<std::size_t>(i)] = r(i);
    rec.z = z;
    rec.s_plus = cstate.s_plus;
    rec.s_minus = cstate.s_minus;
    rec.zeta_plus = cstate.zeta_plus ? 1 : 0;
    rec.zeta_minus = cstate.zeta_minus ? 1 : 0;
    rec.alpha_plus = cstate.alpha_hat_plus;
    rec.alpha_minus = cstate.alpha_hat_minus;
    rec.c = custate.c;
    rec.zeta_c = zeta_c ? 1 : 0;
    rec.alpha_c = alpha_c;
    rec.cusign_detect = cusign_detect ? 1 : 0;
    rec.cusum_detect = cusum_detect ? 1 : 0;
    trace.records.push_back(rec);

    if (k >= warmup) {
      sum.post_warmup_steps += 1;
      if (cusign_detect) {
        sum.cusign_detect_steps += 1;
        if (sum.first_cusign_detect < 0) sum.first_cusign_detect = k;
      }
      if (cusum_detect) {
        sum.cusum_detect_steps += 1;
        if (sum.first_cusum_detect < 0) sum.first_cusum_detect = k;
      }
    }
    if (sum.attack_onset >= 0 && k >= sum.attack_onset) {
      sum.max_c_post_onset = std::max(sum.max_c_post_onset, custate.c);
    }

    // Plant propagation and kinematic pose integration from the step-k values.
    pose_true.x() += cfg.ugv.ts * x(0) * std::cos(x(1));
    pose_true.y() += cfg.ugv.ts * x(0) * std::sin(x(1));
    pose_est.x() += cfg.ugv.ts * vhat_k * std::cos(thhat_k);
    pose_est.y() += cfg.ugv.ts * vhat_k * std::sin(thhat_k);
    x = model.A * x + model.B * u + nu;

    if ((pose_est - corners[static_cast<std::size_t>(goal_index)]).norm() <
        cfg.controller.capture_radius) {
      sum.capture_steps.push_back(k);
      sum.capture_corners.push_back(goal_index);
      goal_index = (goal_index + 1) % 4;
    }
  }

  if (!trace.records.empty()) {
    const StepRecord& last = trace.records.back();
    sum.final_alpha_plus = last.alpha_plus;
    sum.final_alpha_minus = last.alpha_minus;
    sum.final_alpha_c = last.alpha_c;
  }
  if (sum.post_warmup_steps > 0) {
    long long detect_steps = 0;
    for (const StepRecord& rec : trace.records) {
      if (rec.k >= warmup && (rec.cusign_detect || rec.cusum_detect)) ++detect_steps;
    }
    sum.detection_free_fraction =
        1.0 - static_cast<double>(detect_steps) / static_cast<double>(sum.post_warmup_steps);
  }
  return trace;
}

}  // namespace cusign
