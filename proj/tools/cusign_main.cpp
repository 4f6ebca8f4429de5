#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cusign/errors.hpp"
#include "cusign/experiments.hpp"
#include "cusign/report.hpp"
#include "cusign/scenario.hpp"
#include "cusign/scenario_config.hpp"
#include "cusign/trace_io.hpp"
#include "cusign/version.hpp"

namespace {

// Writes the report to `path` (or stdout when empty) in the requested format
// and maps the verdict to the process exit code: 0 all pass, 1 otherwise.
int emit_report(const cusign::Report& report, const std::string& path,
                const std::string& format) {
  const auto write = [&](std::ostream& out) {
    if (format == "json") {
      cusign::write_report_json(report, out);
    } else {
      cusign::write_report_csv(report, out);
    }
  };
  if (path.empty()) {
    write(std::cout);
  } else {
    std::ofstream out(path);
    if (!out) throw cusign::UsageError("cannot open output file '" + path + "'");
    write(out);
  }
  if (!report.all_pass()) {
    std::cerr << "FAIL: ";
    for (const cusign::ReportRow& row : report.rows) {
      if (!row.pass) {
        std::cerr << row.table << "/" << row.name << " ";
      }
    }
    std::cerr << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cusign: sign-accumulator detector toolkit for residual-based "
               "attack detection"};
  app.set_version_flag("--version", cusign::kVersion);
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  long long samples = 1'000'000;
  int window = 100;
  std::string out_path;
  std::string format = "csv";
  app.add_option("--seed", seed, "Master seed for all pseudo-random streams");
  app.add_option("--samples", samples,
                 "Trial count N for the statistical subcommands (>= 10000)");
  app.add_option("--window", window, "Pseudo-window length ell");
  app.add_option("--out", out_path, "Report output path (default: stdout)");
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* cmd_validate = app.add_subcommand(
      "validate", "Deterministic analytic invariant suite (no Monte Carlo)");
  bool inject_theta_error = false;
  cmd_validate
      ->add_flag("--inject-theta-error", inject_theta_error,
                 "Corrupt one scaling-table measurement (harness self-test)")
      ->group("");

  CLI::App* cmd_table2 = app.add_subcommand(
      "table2", "Analytic vs simulated alarm rates at the symmetric design point");

  CLI::App* cmd_theta =
      app.add_subcommand("theta", "Calibrate the variance-scaling value theta");
  double theta_p_plus = 0.5;
  cmd_theta->add_option("--p-plus", theta_p_plus,
                        "Sign-level advance probability (default 0.5)");

  CLI::App* cmd_appendix = app.add_subcommand(
      "appendix", "Estimator mean/std grid over threshold x sign probability");
  std::string hist_path;
  cmd_appendix->add_option(
      "--hist", hist_path,
      "Also write a binned histogram CSV of the post-warmup estimates");

  CLI::App* cmd_scenario = app.add_subcommand(
      "scenario", "Run a closed-loop vehicle scenario from a config file");
  std::string config_path;
  cmd_scenario->add_option("config", config_path, "Scenario config file")->required();
  std::string trace_path = "trace.csv";
  cmd_scenario->add_option("--trace", trace_path,
                           "Per-step trace CSV path (default: trace.csv)");

  // Let the shared options (--seed, --out, ...) be written after the
  // subcommand name as well as before it.
  for (CLI::App* sub : {cmd_validate, cmd_table2, cmd_theta, cmd_appendix, cmd_scenario}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help exits 0; real parse errors are usage errors
  }

  try {
    cusign::RunOptions opt;
    opt.samples = samples;
    opt.ell = window;
    opt.seed = seed;

    if (cmd_validate->parsed()) {
      return emit_report(cusign::analytic_validation(inject_theta_error), out_path, format);
    }
    if (cmd_table2->parsed()) {
      return emit_report(cusign::alarm_rate_table(opt), out_path, format);
    }
    if (cmd_theta->parsed()) {
      opt.p_plus = theta_p_plus;
      return emit_report(cusign::theta_calibration(opt), out_path, format);
    }
    if (cmd_appendix->parsed()) {
      if (hist_path.empty()) {
        return emit_report(cusign::extended_statistics(opt), out_path, format);
      }
      std::vector<cusign::Histogram> hists;
      const cusign::Report report = cusign::extended_statistics(opt, &hists);
      cusign::write_histogram_csv(hists, hist_path);
      return emit_report(report, out_path, format);
    }
    if (cmd_scenario->parsed()) {
      cusign::ScenarioConfig cfg = cusign::parse_scenario_config(config_path);
      if (app.count("--seed") > 0) cfg.seed = seed;  // explicit flag beats the file
      const cusign::ScenarioTrace trace = cusign::run_scenario(cfg);
      cusign::write_trace_csv(trace, cfg.seed, trace_path);
      return emit_report(cusign::scenario_report(trace, cfg), out_path, format);
    }
  } catch (const cusign::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cusign::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cusign::InvalidArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
