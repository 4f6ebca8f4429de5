#pragma once

#include <iosfwd>
#include <string>

#include "cusign/scenario.hpp"

namespace cusign {

// Parses a flat `key = value` scenario config ('#' starts a comment; blank
// lines ignored). Unknown keys and malformed values raise ConfigError with
// file:line diagnostics. Every key is optional and falls back to the
// ScenarioConfig defaults. Recognized keys:
//
//   seed, duration_s, side_m, cruise_mps
//   ugv.m, ugv.iz, ugv.w, ugv.br, ugv.bl, ugv.ts
//   noise.q, noise.r                  (3 comma-separated diagonal entries)
//   cusign.tau, cusign.ell, cusign.z_confidence, cusign.theta
//   cusign.z_ref                      ("auto" or a positive number)
//   cusum.bias, cusum.threshold, cusum.ell, cusum.target_rate
//   attack.kind                       (none | additive_bias |
//                                      stealthy_persistent | stealthy_alternating)
//   attack.onset, attack.magnitude, attack.channel (zero-based),
//   attack.period, attack.cancel_full_residual (true | false)
//   controller.kv, controller.kh, controller.kw, controller.sat,
//   controller.capture_radius
ScenarioConfig parse_scenario_config(const std::string& path);
ScenarioConfig parse_scenario_config(std::istream& in, const std::string& name);

}  // namespace cusign
