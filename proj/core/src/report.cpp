#include "cusign/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "cusign/version.hpp"

namespace cusign {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void Report::add_checked(std::string table, std::string name, double expected, double measured,
                         double tolerance, std::string note) {
  const bool ok = std::fabs(measured - expected) <= tolerance;
  rows.push_back(ReportRow{std::move(table), std::move(name), expected, measured, tolerance, ok,
                           std::move(note)});
}

void Report::add_info(std::string table, std::string name, double measured, std::string note) {
  rows.push_back(ReportRow{std::move(table), std::move(name), std::nullopt, measured,
                           std::nullopt, true, std::move(note)});
}

void Report::add_verdict(std::string table, std::string name, bool pass, double measured,
                         std::string note) {
  rows.push_back(ReportRow{std::move(table), std::move(name), std::nullopt, measured,
                           std::nullopt, pass, std::move(note)});
}

bool Report::all_pass() const {
  for (const ReportRow& row : rows) {
    if (!row.pass) return false;
  }
  return true;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void write_report_csv(const Report& report, std::ostream& out) {
  out << "# schema = " << kReportSchema << "\n";
  out << "# version = " << kVersion << "\n";
  out << "# title = " << report.title << "\n";
  out << "# seed = " << report.seed << "\n";
  out << "# samples = " << report.samples << "\n";
  out << "# status = " << (report.all_pass() ? "PASS" : "FAIL") << "\n";
  out << "table,name,expected,measured,tolerance,pass,note\n";
  for (const ReportRow& row : report.rows) {
    out << csv_escape(row.table) << ',' << csv_escape(row.name) << ','
        << (row.expected ? format_double(*row.expected) : std::string{}) << ','
        << format_double(row.measured) << ','
        << (row.tolerance ? format_double(*row.tolerance) : std::string{}) << ','
        << (row.pass ? "1" : "0") << ',' << csv_escape(row.note) << "\n";
  }
}

void write_report_json(const Report& report, std::ostream& out) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["version"] = kVersion;
  j["title"] = report.title;
  j["seed"] = report.seed;
  j["samples"] = report.samples;
  j["status"] = report.all_pass() ? "PASS" : "FAIL";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const ReportRow& row : report.rows) {
    nlohmann::ordered_json r;
    r["table"] = row.table;
    r["name"] = row.name;
    if (row.expected) {
      r["expected"] = *row.expected;
    } else {
      r["expected"] = nullptr;
    }
    r["measured"] = row.measured;
    if (row.tolerance) {
      r["tolerance"] = *row.tolerance;
    } else {
      r["tolerance"] = nullptr;
    }
    r["pass"] = row.pass;
    r["note"] = row.note;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  out << j.dump(2) << "\n";
}

}  // namespace cusign
