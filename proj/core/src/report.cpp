#include "poswalk/report.hpp"

#include <limits>
#include <ostream>

#include "json.hpp"

namespace poswalk {

bool DiagnosticReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

void DiagnosticReport::add(const std::string& name, bool passed,
                           double observed, double bound,
                           const std::string& details) {
  checks.push_back({name, passed, observed, bound, details});
}

void write_report_json(const DiagnosticReport& report, std::ostream& out) {
  nlohmann::ordered_json j;
  j["tool"] = report.tool;
  j["version"] = kVersion;
  j["config"] = report.config;
  j["all_passed"] = report.all_passed();
  auto& arr = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["passed"] = c.passed;
    jc["observed"] = c.observed;
    jc["bound"] = c.bound;
    if (!c.details.empty()) jc["details"] = c.details;
    arr.push_back(std::move(jc));
  }
  out << j.dump(2) << '\n';
}

namespace {

// Commas and quotes in detail strings get the usual CSV quoting.
void csv_field(const std::string& s, std::ostream& out) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    out << s;
    return;
  }
  out << '"';
  for (char ch : s) {
    if (ch == '"') out << '"';
    out << ch;
  }
  out << '"';
}

}  // namespace

void write_report_csv(const DiagnosticReport& report, std::ostream& out) {
  out << "name,passed,observed,bound,details\n";
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& c : report.checks) {
    csv_field(c.name, out);
    out << ',' << (c.passed ? 1 : 0) << ',' << c.observed << ',' << c.bound
        << ',';
    csv_field(c.details, out);
    out << '\n';
  }
  out.precision(old);
}

void write_csv_table(const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows,
                     std::ostream& out) {
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) out << ',';
    csv_field(columns[i], out);
  }
  out << '\n';
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
  out.precision(old);
}

}  // namespace poswalk
