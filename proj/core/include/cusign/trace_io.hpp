#pragma once

#include <iosfwd>
#include <string>

#include "cusign/scenario.hpp"

namespace cusign {

// Writes the per-step trace as CSV: schema/seed metadata comment lines, a
// fixed header
//   k,t,x0,x1,x2,xhat0,xhat1,xhat2,y0,y1,y2,xi0,xi1,xi2,r0,r1,r2,z,
//   S_plus,S_minus,zeta_plus,zeta_minus,alpha_plus,alpha_minus,
//   C,zeta_C,alpha_C,cusign_detect,cusum_detect
// then one row per step. Doubles use %.17g; output is byte-stable for a
// fixed config and seed.
void write_trace_csv(const ScenarioTrace& trace, std::uint64_t seed, std::ostream& out);
void write_trace_csv(const ScenarioTrace& trace, std::uint64_t seed, const std::string& path);

}  // namespace cusign
