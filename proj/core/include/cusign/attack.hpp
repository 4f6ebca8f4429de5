#pragma once

#include "cusign/linalg.hpp"
#include "cusign/lti.hpp"

namespace cusign {

enum class AttackKind { none, additive_bias, stealthy_persistent, stealthy_alternating };

// Schedule and shape of a sensor attack. `payload` is the target vector the
// stealthy construction plants in the whitened residual (for additive_bias it
// is the raw measurement offset). For stealthy kinds the attacker is granted
// measurement visibility (an AttackerView is required at apply time).
struct AttackSpec {
  AttackKind kind = AttackKind::none;
  long long onset = 0;
  Vec payload;                      // dimension s
  int period = 1;                   // alternation half-period in steps
  bool cancel_full_residual = true; // false: cancel only the payload channel
  int channel = 0;                  // designated channel (zero-based), kept for reporting

  // Scalar-magnitude convenience constructor: payload = magnitude * e_channel.
  static AttackSpec scalar(AttackKind kind, long long onset, double magnitude, int channel,
                           int s, int period = 1);

  void validate(int s) const;
};

// What a stealthy attacker can read at the current step: the (noisy) sensor
// vector before tampering and the estimator's output prediction.
struct AttackerView {
  Vec y;       // C x + eta
  Vec y_pred;  // C xhat
};

// Residual-replacement construction:
//   xi = -(y - C xhat) + SigmaHalf * xi_target
// so the post-attack residual equals SigmaHalf * xi_target exactly and the
// test measure becomes xi_target' * xi_target.
Vec stealthy_xi(const AttackerView& view, const Mat& sigma_half, const Vec& xi_target);

// Scheduled target vector: zero before onset; constant for persistent;
// sign-flipped every `period` steps for alternating (period 1 flips each step).
Vec payload_at(const AttackSpec& spec, long long k);

// Dispatch by kind. `none` returns zero; additive_bias returns the scheduled
// payload without residual cancellation; stealthy kinds build the
// residual-replacement vector (optionally confined to the payload channel).
Vec apply_attack(const AttackSpec& spec, const AttackerView& view, const EstimatorState& est,
                 long long k);

}  // namespace cusign
