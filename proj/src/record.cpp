#include "comgap/record.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace comgap {

namespace {

std::string format12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

double round_sig12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x;
  return std::strtod(format12(x).c_str(), nullptr);
}

void ExperimentRecord::set_scalar(const std::string& key, double value) {
  scalars[key] = round_sig12(value);
}

void ExperimentRecord::add_row(const std::vector<double>& row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("ExperimentRecord: row width does not match columns");
  }
  std::vector<double> rounded(row.size());
  std::transform(row.begin(), row.end(), rounded.begin(), round_sig12);
  rows.push_back(std::move(rounded));
}

bool ExperimentRecord::all_checks_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

nlohmann::json to_json(const ExperimentRecord& record, bool include_wall_clock) {
  nlohmann::json j;
  j["command"] = record.command;
  j["tool_version"] = record.tool_version;
  j["config"] = record.config;
  j["provenance"] = record.provenance;
  j["scalars"] = record.scalars;
  j["columns"] = record.columns;
  j["rows"] = record.rows;
  auto checks = nlohmann::json::array();
  for (const auto& c : record.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  j["checks"] = std::move(checks);
  if (include_wall_clock) j["wall_clock_seconds"] = round_sig12(record.wall_clock_seconds);
  return j;
}

ExperimentRecord record_from_json(const nlohmann::json& j) {
  ExperimentRecord r;
  r.command = j.at("command").get<std::string>();
  r.tool_version = j.at("tool_version").get<std::string>();
  r.config = j.at("config").get<std::map<std::string, std::string>>();
  r.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
  r.scalars = j.at("scalars").get<std::map<std::string, double>>();
  r.columns = j.at("columns").get<std::vector<std::string>>();
  r.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  for (const auto& c : j.at("checks")) {
    r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                        c.at("detail").get<std::string>()});
  }
  if (j.contains("wall_clock_seconds")) {
    r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  }
  return r;
}

std::string to_json_string(const ExperimentRecord& record, bool include_wall_clock) {
  return to_json(record, include_wall_clock).dump(2) + "\n";
}

std::string to_csv(const ExperimentRecord& record) {
  std::string out;
  for (std::size_t c = 0; c < record.columns.size(); ++c) {
    if (c) out += ',';
    out += record.columns[c];
  }
  out += '\n';
  for (const auto& row : record.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format12(row[c]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace comgap
