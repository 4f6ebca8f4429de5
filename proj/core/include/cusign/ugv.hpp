#pragma once

#include <Eigen/Dense>

#include "cusign/lti.hpp"

namespace cusign {

// Skid-steer differential-drive parameters. State x = [v, theta_h, omega]
// (forward speed, heading, yaw rate), inputs u = [F_l, F_r]:
//   v_dot     = (F_l + F_r - B_r v) / m
//   theta_dot = omega
//   omega_dot = (w (F_l - F_r) / 2 - B_l omega) / I_z
struct UgvParams {
  double m = 10.0;   // mass [kg]
  double iz = 1.0;   // yaw inertia [kg m^2]
  double w = 0.5;    // track width [m]
  double br = 5.0;   // rolling resistance
  double bl = 2.0;   // turning resistance
  double ts = 0.01;  // sampling period [s]

  void validate() const;
};

// Forward-Euler discretization (A_d = I + ts A_c, B_d = ts B_c) with all three
// states measured (C = I, s = 3).
SystemModel build_ugv_model(const UgvParams& params, const Mat& q, const Mat& r);

struct ControllerParams {
  double kv = 20.0;            // speed gain
  double kh = 40.0;            // heading gain
  double kw = 12.0;            // yaw-rate damping
  double sat = 50.0;           // per-wheel force saturation [N]
  double capture_radius = 0.2; // waypoint switch distance [m]

  void validate() const;
};

// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

// Proportional waypoint tracker: common-mode force = feedforward B_r v_des
// plus speed-error term; differential force from the wrapped heading error
// with yaw-rate damping; per-wheel clamp at +/- sat. Positive differential
// goes to the left wheel (the model's sign convention makes F_l > F_r turn
// toward positive heading).
Vec waypoint_force(const Vec& xhat, const Eigen::Vector2d& pose,
                   const Eigen::Vector2d& goal, double v_des, const UgvParams& ugv,
                   const ControllerParams& ctrl);

}  // namespace cusign
