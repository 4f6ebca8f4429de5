#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cusign {

// One measurement row. `expected`/`tolerance` are absent for purely
// informational rows (those always pass); when a target exists the row
// carries it together with the measurement and the pass verdict — no
// silent passes.
struct ReportRow {
  std::string table;
  std::string name;
  std::optional<double> expected;
  double measured = 0.0;
  std::optional<double> tolerance;
  bool pass = true;
  std::string note;
};

struct Report {
  std::string title;
  std::uint64_t seed = 0;
  long long samples = 0;
  std::vector<ReportRow> rows;

  // Convenience for rows with a target and absolute tolerance.
  void add_checked(std::string table, std::string name, double expected, double measured,
                   double tolerance, std::string note = "");
  // Informational row (no target).
  void add_info(std::string table, std::string name, double measured, std::string note = "");
  // Explicit verdict (e.g. boolean checks reported as 0/1).
  void add_verdict(std::string table, std::string name, bool pass, double measured,
                   std::string note = "");

  bool all_pass() const;
};

// Deterministic serialization: no timestamps, fixed float formatting
// (shortest round-trip via %.17g), so identical inputs give identical bytes.
void write_report_csv(const Report& report, std::ostream& out);
void write_report_json(const Report& report, std::ostream& out);

// %.17g float formatting shared by the report and trace writers.
std::string format_double(double v);

}  // namespace cusign
