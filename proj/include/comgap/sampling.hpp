#pragma once

// Monte Carlo draws of an observable and the empirical tail estimates built
// from them. Samples are split into a fixed number of blocks, each with its
// own rng_stream(seed, label, block), so results do not depend on the thread
// count or schedule.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "comgap/rng.hpp"

namespace comgap {

inline constexpr std::size_t kSampleBlocks = 256;

inline std::size_t block_begin(std::size_t block, std::size_t blocks, std::size_t n) {
  return block * n / blocks;
}

/// n values of draw(rng), OpenMP-parallel over blocks.
template <class Draw>
std::vector<double> draw_samples(const Draw& draw, std::size_t n, std::uint64_t seed,
                                 std::string_view label) {
  std::vector<double> out(n);
  const std::size_t blocks = std::min(kSampleBlocks, std::max<std::size_t>(n, 1));
  const auto nb = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const auto ub = static_cast<std::size_t>(b);
    Rng rng = rng_stream(seed, label, ub);
    const std::size_t end = block_begin(ub + 1, blocks, n);
    for (std::size_t i = block_begin(ub, blocks, n); i < end; ++i) out[i] = draw(rng);
  }
  return out;
}

/// Serial reference for draw_samples; identical output.
template <class Draw>
std::vector<double> draw_samples_serial(const Draw& draw, std::size_t n, std::uint64_t seed,
                                        std::string_view label) {
  std::vector<double> out(n);
  const std::size_t blocks = std::min(kSampleBlocks, std::max<std::size_t>(n, 1));
  for (std::size_t b = 0; b < blocks; ++b) {
    Rng rng = rng_stream(seed, label, b);
    const std::size_t end = block_begin(b + 1, blocks, n);
    for (std::size_t i = block_begin(b, blocks, n); i < end; ++i) out[i] = draw(rng);
  }
  return out;
}

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

MeanEstimate estimate_mean(std::span<const double> samples);

struct TailEstimate {
  double level = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Fraction of samples with x - centering.mean >= level. The standard error
/// combines the binomial error with the effect of shifting the centering by
/// one standard error of the mean.
std::vector<TailEstimate> tail_estimates(std::span<const double> samples,
                                         const MeanEstimate& centering,
                                         std::span<const double> levels);

enum class Centering { independent_run, same_run };

inline const char* to_string(Centering c) {
  return c == Centering::same_run ? "same_run" : "independent_run";
}

/// Empirical positive tails of f under sampler at each level. The mean used
/// for centering comes from an independent run (label "mean") unless
/// same_run is requested.
template <class Sampler, class Obs>
std::vector<TailEstimate> empirical_tails(const Sampler& sampler, const Obs& f,
                                          std::span<const double> levels, std::size_t n_samples,
                                          std::uint64_t seed,
                                          Centering centering = Centering::independent_run) {
  auto draw = [&](Rng& rng) { return static_cast<double>(f(sampler(rng))); };
  const auto tail = draw_samples(draw, n_samples, seed, "tail");
  MeanEstimate m;
  if (centering == Centering::same_run) {
    m = estimate_mean(tail);
  } else {
    m = estimate_mean(draw_samples(draw, n_samples, seed, "mean"));
  }
  return tail_estimates(tail, m, levels);
}

template <class Sampler, class Obs>
TailEstimate empirical_tail(const Sampler& sampler, const Obs& f, double a, std::size_t n_samples,
                            std::uint64_t seed,
                            Centering centering = Centering::independent_run) {
  const double levels[] = {a};
  return empirical_tails(sampler, f, levels, n_samples, seed, centering).front();
}

}  // namespace comgap
