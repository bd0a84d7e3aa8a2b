#pragma once
// Invariant battery behind the `verify` command. Each module contributes a
// list of named checks; sizes are kept small enough to finish in seconds.

#include <cstdint>
#include <vector>

#include "comgap/record.hpp"

namespace comgap {

std::vector<CheckResult> verify_bound_core();
std::vector<CheckResult> verify_markov_core(std::uint64_t seed);
std::vector<CheckResult> verify_lis(std::uint64_t seed);
std::vector<CheckResult> verify_glauber_tfa(std::uint64_t seed);
std::vector<CheckResult> verify_harness(std::uint64_t seed);

/// All of the above, concatenated in module order.
std::vector<CheckResult> run_invariant_battery(std::uint64_t seed);

}  // namespace comgap
