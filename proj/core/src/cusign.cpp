#include "cusign/cusign.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

#include "cusign/errors.hpp"

namespace cusign {

namespace {

void check_probs(double p_plus, double p_minus) {
  if (std::fabs(p_plus + p_minus - 1.0) > 1e-12) {
    throw InvalidArgumentError("sign probabilities must sum to 1");
  }
  if (p_plus <= 0.0 || p_plus >= 1.0) {
    throw DegenerateProbabilityError("sign probability at 0 or 1 makes the chain degenerate");
  }
}

}  // namespace

void CusignConfig::validate() const {
  if (tau < 1) throw InvalidArgumentError("CusignConfig: tau must be >= 1");
  if (ell < 10) throw InvalidArgumentError("CusignConfig: ell must be >= 10");
  if (!(z_ref > 0.0)) throw InvalidArgumentError("CusignConfig: z_ref must be > 0");
  if (!(z_confidence >= 0.0)) throw InvalidArgumentError("CusignConfig: Z must be >= 0");
  if (std::fabs(p_plus + p_minus - 1.0) > 1e-12) {
    throw InvalidArgumentError("CusignConfig: p_plus + p_minus must equal 1");
  }
}

int sign_of(double z, double z_ref) {
  if (z > z_ref) return 1;
  if (z < z_ref) return -1;
  return 0;
}

double mre_update(double alpha_hat, int zeta, int ell) {
  if (ell < 1) throw InvalidArgumentError("mre_update: ell must be >= 1");
  if (alpha_hat < 0.0 || alpha_hat > 1.0) {
    throw InvalidArgumentError("mre_update: alpha_hat must lie in [0, 1]");
  }
  if (zeta != 0 && zeta != 1) throw InvalidArgumentError("mre_update: zeta must be 0 or 1");
  return alpha_hat + (static_cast<double>(zeta) - alpha_hat) / static_cast<double>(ell);
}

std::pair<bool, bool> cusign_step_sign(CusignState& state, const CusignConfig& cfg, int sgn) {
  int plus = std::max(0, state.s_plus + sgn);
  bool zeta_plus = false;
  if (plus >= cfg.tau) {
    plus = 0;
    zeta_plus = true;
  }
  int minus = std::min(0, state.s_minus + sgn);
  bool zeta_minus = false;
  if (minus <= -cfg.tau) {
    minus = 0;
    zeta_minus = true;
  }
  state.s_plus = plus;
  state.s_minus = minus;
  state.zeta_plus = zeta_plus;
  state.zeta_minus = zeta_minus;
  state.alpha_hat_plus = mre_update(state.alpha_hat_plus, zeta_plus ? 1 : 0, cfg.ell);
  state.alpha_hat_minus = mre_update(state.alpha_hat_minus, zeta_minus ? 1 : 0, cfg.ell);
  return {zeta_plus, zeta_minus};
}

std::pair<bool, bool> cusign_step(CusignState& state, const CusignConfig& cfg, double z) {
  return cusign_step_sign(state, cfg, sign_of(z, cfg.z_ref));
}

Mat transition_matrix(int tau, double p_plus, double p_minus, AccumCase which) {
  if (tau < 1) throw InvalidArgumentError("transition_matrix: tau must be >= 1");
  check_probs(p_plus, p_minus);
  const double advance = which == AccumCase::plus ? p_plus : p_minus;
  const double retreat = 1.0 - advance;
  Mat t = Mat::Zero(tau + 1, tau + 1);
  for (int j = 0; j < tau; ++j) {
    t(j, std::max(j - 1, 0)) += retreat;  // retreat pools at the floor state
    t(j, j + 1) += advance;
  }
  t(tau, tau) = 1.0;  // absorbing alarm state
  return t;
}

double expected_alarm_rate(int tau, double p_plus, double p_minus, AccumCase which) {
  const Mat t = transition_matrix(tau, p_plus, p_minus, which);
  const Mat r = t.topLeftCorner(tau, tau);
  const Mat m = Mat::Identity(tau, tau) - r;
  Eigen::FullPivLU<Mat> lu(m);
  if (!lu.isInvertible()) {
    throw DegenerateProbabilityError("expected_alarm_rate: I - R is singular");
  }
  const Vec mu = lu.solve(Vec::Ones(tau));
  return 1.0 / mu(0);
}

double theta_scale(int tau, int ell) {
  if (ell < 10) throw InvalidArgumentError("theta_scale: ell must be >= 10");
  static constexpr double coeff[4] = {1.0, 0.74, 0.70, 0.69};
  if (tau < 1 || tau > 4) {
    throw UnsupportedThresholdError(
        "theta_scale: tau outside the calibrated table {1,2,3,4}; supply a custom theta");
  }
  return coeff[tau - 1] * static_cast<double>(ell) / (2.0 * static_cast<double>(ell) - 1.0);
}

AlarmRateBounds detection_bounds_with_theta(double expected_rate, double theta, int ell,
                                            double z_confidence) {
  if (!(expected_rate > 0.0 && expected_rate < 1.0)) {
    throw InvalidArgumentError("detection_bounds: expected rate must lie in (0, 1)");
  }
  if (!(theta > 0.0)) throw InvalidArgumentError("detection_bounds: theta must be > 0");
  if (ell < 1) throw InvalidArgumentError("detection_bounds: ell must be >= 1");
  if (!(z_confidence >= 0.0)) throw InvalidArgumentError("detection_bounds: Z must be >= 0");
  const double sd = std::sqrt(theta * expected_rate * (1.0 - expected_rate) /
                              static_cast<double>(ell));
  double lower = expected_rate - z_confidence * sd;
  if (lower < 0.0) lower = 0.0;  // negative lower bounds are dropped at zero
  return AlarmRateBounds{expected_rate, lower, expected_rate + z_confidence * sd, theta};
}

AlarmRateBounds detection_bounds(double expected_rate, int tau, int ell, double z_confidence) {
  return detection_bounds_with_theta(expected_rate, theta_scale(tau, ell), ell, z_confidence);
}

bool monitor(double alpha_hat, const AlarmRateBounds& bounds) {
  return alpha_hat < bounds.lower || alpha_hat > bounds.upper;
}

}  // namespace cusign
