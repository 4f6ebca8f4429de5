#include "cusign/scenario_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "cusign/errors.hpp"

namespace cusign {

namespace {

struct ParseCtx {
  const std::string& name;
  int line = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(name + ":" + std::to_string(line) + ": " + msg);
  }
};

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  const auto last = s.find_last_not_of(" \t\r");
  if (first == std::string::npos) return "";
  return s.substr(first, last - first + 1);
}

double parse_double(const ParseCtx& ctx, const std::string& v) {
  double d = 0.0;
  std::size_t pos = 0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    ctx.fail("expected a number, got '" + v + "'");
  }
  if (pos != v.size()) ctx.fail("trailing characters after number '" + v + "'");
  return d;
}

long long parse_int(const ParseCtx& ctx, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    ctx.fail("expected an integer, got '" + v + "'");
  }
  return out;
}

bool parse_bool(const ParseCtx& ctx, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  ctx.fail("expected true or false, got '" + v + "'");
}

std::array<double, 3> parse_diag3(const ParseCtx& ctx, const std::string& v) {
  std::array<double, 3> out{};
  std::stringstream ss(v);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 3) ctx.fail("expected exactly 3 comma-separated values");
    out[static_cast<std::size_t>(i++)] = parse_double(ctx, trim(item));
  }
  if (i != 3) ctx.fail("expected exactly 3 comma-separated values");
  return out;
}

AttackKind parse_kind(const ParseCtx& ctx, const std::string& v) {
  if (v == "none") return AttackKind::none;
  if (v == "additive_bias") return AttackKind::additive_bias;
  if (v == "stealthy_persistent") return AttackKind::stealthy_persistent;
  if (v == "stealthy_alternating") return AttackKind::stealthy_alternating;
  ctx.fail("unknown attack kind '" + v + "'");
}

}  // namespace

ScenarioConfig parse_scenario_config(std::istream& in, const std::string& name) {
  ScenarioConfig cfg;
  // Attack fields accumulate separately; the payload vector is assembled once
  // the whole file is read.
  AttackKind kind = AttackKind::none;
  long long onset = 0;
  double magnitude = 0.0;
  int channel = 0;
  int period = 1;
  bool cancel_full = true;

  ParseCtx ctx{name, 0};
  std::string raw;
  while (std::getline(in, raw)) {
    ++ctx.line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) ctx.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) ctx.fail("empty key");
    if (value.empty()) ctx.fail("empty value for key '" + key + "'");

    if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(ctx, value));
    } else if (key == "duration_s") {
      cfg.duration_s = parse_double(ctx, value);
    } else if (key == "side_m") {
      cfg.side_m = parse_double(ctx, value);
    } else if (key == "cruise_mps") {
      cfg.cruise_mps = parse_double(ctx, value);
    } else if (key == "ugv.m") {
      cfg.ugv.m = parse_double(ctx, value);
    } else if (key == "ugv.iz") {
      cfg.ugv.iz = parse_double(ctx, value);
    } else if (key == "ugv.w") {
      cfg.ugv.w = parse_double(ctx, value);
    } else if (key == "ugv.br") {
      cfg.ugv.br = parse_double(ctx, value);
    } else if (key == "ugv.bl") {
      cfg.ugv.bl = parse_double(ctx, value);
    } else if (key == "ugv.ts") {
      cfg.ugv.ts = parse_double(ctx, value);
    } else if (key == "noise.q") {
      cfg.q_diag = parse_diag3(ctx, value);
    } else if (key == "noise.r") {
      cfg.r_diag = parse_diag3(ctx, value);
    } else if (key == "cusign.tau") {
      cfg.cusign_tau = static_cast<int>(parse_int(ctx, value));
    } else if (key == "cusign.ell") {
      cfg.cusign_ell = static_cast<int>(parse_int(ctx, value));
    } else if (key == "cusign.z_confidence") {
      cfg.cusign_z = parse_double(ctx, value);
    } else if (key == "cusign.theta") {
      cfg.cusign_theta = parse_double(ctx, value);
    } else if (key == "cusign.z_ref") {
      if (value == "auto") {
        cfg.z_ref_auto = true;
      } else {
        cfg.z_ref_auto = false;
        cfg.z_ref_value = parse_double(ctx, value);
      }
    } else if (key == "cusum.bias") {
      cfg.cusum_bias = parse_double(ctx, value);
    } else if (key == "cusum.threshold") {
      cfg.cusum_threshold = parse_double(ctx, value);
    } else if (key == "cusum.ell") {
      cfg.cusum_ell = static_cast<int>(parse_int(ctx, value));
    } else if (key == "cusum.target_rate") {
      cfg.cusum_target_rate = parse_double(ctx, value);
    } else if (key == "attack.kind") {
      kind = parse_kind(ctx, value);
    } else if (key == "attack.onset") {
      onset = parse_int(ctx, value);
    } else if (key == "attack.magnitude") {
      magnitude = parse_double(ctx, value);
    } else if (key == "attack.channel") {
      channel = static_cast<int>(parse_int(ctx, value));
    } else if (key == "attack.period") {
      period = static_cast<int>(parse_int(ctx, value));
    } else if (key == "attack.cancel_full_residual") {
      cancel_full = parse_bool(ctx, value);
    } else if (key == "controller.kv") {
      cfg.controller.kv = parse_double(ctx, value);
    } else if (key == "controller.kh") {
      cfg.controller.kh = parse_double(ctx, value);
    } else if (key == "controller.kw") {
      cfg.controller.kw = parse_double(ctx, value);
    } else if (key == "controller.sat") {
      cfg.controller.sat = parse_double(ctx, value);
    } else if (key == "controller.capture_radius") {
      cfg.controller.capture_radius = parse_double(ctx, value);
    } else {
      ctx.fail("unknown key '" + key + "'");
    }
  }

  if (kind == AttackKind::none) {
    cfg.attack = AttackSpec{};
  } else {
    ctx.line = 0;  // post-parse validation reports the file, not a line
    try {
      cfg.attack = AttackSpec::scalar(kind, onset, magnitude, channel, 3, period);
      cfg.attack.cancel_full_residual = cancel_full;
    } catch (const Error& e) {
      throw ConfigError(name + ": " + e.what());
    }
  }
  return cfg;
}

ScenarioConfig parse_scenario_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  return parse_scenario_config(in, path);
}

}  // namespace cusign
