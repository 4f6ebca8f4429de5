#include "cusign/ugv.hpp"

#include <algorithm>
#include <cmath>

#include "cusign/errors.hpp"

namespace cusign {

void UgvParams::validate() const {
  if (!(m > 0.0 && iz > 0.0 && w > 0.0 && br > 0.0 && bl > 0.0 && ts > 0.0)) {
    throw InvalidArgumentError("UgvParams: all parameters must be strictly positive");
  }
}

void ControllerParams::validate() const {
  if (!(kv > 0.0 && kh > 0.0 && kw >= 0.0 && sat > 0.0 && capture_radius > 0.0)) {
    throw InvalidArgumentError("ControllerParams: gains, saturation and capture radius must be positive");
  }
}

SystemModel build_ugv_model(const UgvParams& p, const Mat& q, const Mat& r) {
  p.validate();
  Mat ac(3, 3);
  ac << -p.br / p.m, 0.0, 0.0,
        0.0,         0.0, 1.0,
        0.0,         0.0, -p.bl / p.iz;
  Mat bc(3, 2);
  bc << 1.0 / p.m,           1.0 / p.m,
        0.0,                 0.0,
        p.w / (2.0 * p.iz), -p.w / (2.0 * p.iz);
  const Mat ad = Mat::Identity(3, 3) + p.ts * ac;
  const Mat bd = p.ts * bc;
  const Mat c = Mat::Identity(3, 3);
  return SystemModel::create(ad, bd, c, q, r);
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * M_PI);  // lands in [-pi, pi]
  if (a == -M_PI) a = M_PI;
  return a;
}

Vec waypoint_force(const Vec& xhat, const Eigen::Vector2d& pose,
                   const Eigen::Vector2d& goal, double v_des, const UgvParams& ugv,
                   const ControllerParams& ctrl) {
  if (xhat.size() != 3) throw DimensionError("waypoint_force: state must be [v, theta, omega]");
  const double v = xhat(0);
  const double theta = xhat(1);
  const double omega = xhat(2);

  const double bearing = std::atan2(goal.y() - pose.y(), goal.x() - pose.x());
  const double heading_err = wrap_angle(bearing - theta);

  const double common = ugv.br * v_des + ctrl.kv * (v_des - v);
  const double differential = ctrl.kh * heading_err - ctrl.kw * omega;

  Vec u(2);
  u(0) = std::clamp(0.5 * (common + differential), -ctrl.sat, ctrl.sat);  // F_l
  u(1) = std::clamp(0.5 * (common - differential), -ctrl.sat, ctrl.sat);  // F_r
  return u;
}

}  // namespace cusign
