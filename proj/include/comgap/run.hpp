#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "comgap/record.hpp"

namespace comgap {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitDomination = 3,
  kExitTolerance = 4,
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  // bound-eval, verify, lis-gap, lis-run, glauber-gap, tfa-run, negative-transfer
  std::string command;

  // bound-eval / negative-transfer
  std::optional<double> gap;
  std::optional<double> lip;
  bool asymmetric = false;

  // Levels: a for bound-eval, t for lis-run and negative-transfer, a for tfa-run.
  std::vector<double> levels;

  // lis-gap / lis-run
  std::optional<int> m;
  std::optional<int> n;
  std::optional<int> k;
  double u = 2.5;

  // glauber-gap / tfa-run
  std::string spec = "birth-death";  // or "uniform"
  int spec_m = 2;                    // Y = {-m eps, ..., m eps}
  double eps = 0.5;
  std::vector<int> n_list{2, 3, 4};
  int band_a = 8;
  int band_b = 24;
  std::optional<double> lambda1;

  std::size_t samples = 100000;
  std::optional<std::uint64_t> seed;
  bool same_run_mean = false;
  double tol = 1e-10;

  std::string format = "json";  // json | csv
  std::string output;           // empty: stdout, or $COMGAP_OUTPUT_DIR/<command>.<format>
};

/// Throws ConfigError on out-of-range parameters, before any computation.
void validate(const RunConfig& config);

struct RunOutcome {
  ExperimentRecord record;
  int exit_code = kExitOk;
};

/// Dispatches to the owning module. Config errors yield kExitConfig with a
/// diagnostic record instead of throwing.
RunOutcome run(const RunConfig& config);

/// Serialized record in the configured format.
std::string serialize(const ExperimentRecord& record, const std::string& format);

/// Where the record goes: explicit output, else $COMGAP_OUTPUT_DIR, else "" (stdout).
std::string resolve_output_path(const RunConfig& config);

}  // namespace comgap
