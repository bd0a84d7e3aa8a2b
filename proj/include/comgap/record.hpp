#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace comgap {

/// Round to 12 significant digits; every number in a record goes through this.
double round_sig12(double x);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

/// Machine-readable output of one harness run: a config echo, provenance per
/// quantity, a numeric table (one row per level or per n), named scalars and
/// pass/fail checks.
struct ExperimentRecord {
  std::string command;
  std::string tool_version;
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> provenance;
  std::map<std::string, double> scalars;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<CheckResult> checks;
  double wall_clock_seconds = 0.0;

  void set_scalar(const std::string& key, double value);
  void add_row(const std::vector<double>& row);
  bool all_checks_passed() const;

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

nlohmann::json to_json(const ExperimentRecord& record, bool include_wall_clock = true);
ExperimentRecord record_from_json(const nlohmann::json& j);
std::string to_json_string(const ExperimentRecord& record, bool include_wall_clock = true);

/// Header row of column names, then one line per table row, %.12g numbers.
std::string to_csv(const ExperimentRecord& record);

}  // namespace comgap
