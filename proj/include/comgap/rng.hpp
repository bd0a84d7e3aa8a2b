#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace comgap {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Stable 64-bit FNV-1a hash; std::hash is not portable across builds.
std::uint64_t label_hash(std::string_view label);

/// Reproducible stream keyed by (seed, label, replica). Streams for distinct
/// keys are decorrelated by splitmix finalization before seeding.
Rng rng_stream(std::uint64_t seed, std::string_view label, std::uint64_t replica);

inline double uniform01(Rng& rng) {
  return std::generate_canonical<double, 53>(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

/// Draws an index from a cumulative table (last entry ~1).
std::size_t sample_cdf(std::span<const double> cdf, Rng& rng);

}  // namespace comgap
