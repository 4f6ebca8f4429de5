#pragma once

namespace cusign {

inline constexpr const char* kVersion = "0.1.0";

// Serialization schema tags embedded in report/trace metadata so downstream
// consumers can detect format changes.
inline constexpr const char* kReportSchema = "cusign-report-v1";
inline constexpr const char* kTraceSchema = "cusign-trace-v1";
inline constexpr const char* kHistSchema = "cusign-hist-v1";

}  // namespace cusign
