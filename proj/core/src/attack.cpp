#include "cusign/attack.hpp"

#include "cusign/errors.hpp"

namespace cusign {

AttackSpec AttackSpec::scalar(AttackKind kind, long long onset, double magnitude, int channel,
                              int s, int period) {
  if (s < 1) throw InvalidArgumentError("AttackSpec: s must be >= 1");
  if (channel < 0 || channel >= s) {
    throw InvalidArgumentError("AttackSpec: channel must be a valid zero-based sensor index");
  }
  AttackSpec spec;
  spec.kind = kind;
  spec.onset = onset;
  spec.payload = Vec::Zero(s);
  spec.payload(channel) = magnitude;
  spec.period = period;
  spec.channel = channel;
  spec.validate(s);
  return spec;
}

void AttackSpec::validate(int s) const {
  if (onset < 0) throw InvalidArgumentError("AttackSpec: onset must be >= 0");
  if (kind == AttackKind::none) return;
  if (payload.size() != s) throw DimensionError("AttackSpec: payload dimension must equal s");
  if (period < 1) throw InvalidArgumentError("AttackSpec: period must be >= 1");
  if (channel < 0 || channel >= s) {
    throw InvalidArgumentError("AttackSpec: channel must be a valid zero-based sensor index");
  }
}

Vec stealthy_xi(const AttackerView& view, const Mat& sigma_half, const Vec& xi_target) {
  if (view.y.size() != view.y_pred.size()) {
    throw DimensionError("stealthy_xi: view vectors must agree in dimension");
  }
  if (sigma_half.rows() != view.y.size() || sigma_half.cols() != xi_target.size()) {
    throw DimensionError("stealthy_xi: SigmaHalf/target dimensions mismatch");
  }
  return -(view.y - view.y_pred) + sigma_half * xi_target;
}

Vec payload_at(const AttackSpec& spec, long long k) {
  const Eigen::Index dim = spec.payload.size();
  if (k < spec.onset || spec.kind == AttackKind::none) return Vec::Zero(dim);
  if (spec.kind == AttackKind::stealthy_alternating) {
    const long long phase = (k - spec.onset) / spec.period;
    return (phase % 2 == 0) ? spec.payload : Vec(-spec.payload);
  }
  return spec.payload;  // additive_bias and stealthy_persistent
}

Vec apply_attack(const AttackSpec& spec, const AttackerView& view, const EstimatorState& est,
                 long long k) {
  const Eigen::Index s = view.y.size();
  if (spec.kind == AttackKind::none || k < spec.onset) return Vec::Zero(s);
  if (spec.kind == AttackKind::additive_bias) return payload_at(spec, k);

  const Vec target = payload_at(spec, k);
  if (spec.cancel_full_residual) {
    return stealthy_xi(view, est.SigmaHalf, target);
  }
  // Channel-confined variant: tamper only with the designated sensor, leaving
  // the other channels' nominal noise in the residual.
  const Vec full = stealthy_xi(view, est.SigmaHalf, target);
  Vec xi = Vec::Zero(s);
  xi(spec.channel) = full(spec.channel);
  return xi;
}

}  // namespace cusign
