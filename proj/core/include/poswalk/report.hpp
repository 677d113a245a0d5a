#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace poswalk {

inline constexpr const char* kVersion = "0.1.0";

// One named check: a measured value against a bound, plus free-form details.
struct CheckResult {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double bound = 0.0;
  std::string details;
};

// Bundle of checks produced by one tool invocation, together with the
// configuration that produced it so runs can be reproduced from the file.
struct DiagnosticReport {
  std::string tool;
  std::map<std::string, std::string> config;
  std::vector<CheckResult> checks;

  bool all_passed() const;
  void add(const std::string& name, bool passed, double observed, double bound,
           const std::string& details = "");
};

// JSON with stable key order and round-trip-exact doubles.
void write_report_json(const DiagnosticReport& report, std::ostream& out);

// CSV rows "name,passed,observed,bound,details".
void write_report_csv(const DiagnosticReport& report, std::ostream& out);

// Writes a numeric table: header row, then one line per row entry.
void write_csv_table(const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows,
                     std::ostream& out);

}  // namespace poswalk
