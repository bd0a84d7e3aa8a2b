#pragma once

// Longest increasing subsequence on the grid A_m^n = {0, 1/m, ..., 1}^n under
// the coordinate-replacement chain: pick a coordinate uniformly, redraw it
// uniformly from A_m. The uniform measure is reversible, the spectral gap is
// exactly 1/n, and the truncated observable min(K, LIS) has asymmetric
// one-step Lipschitz constant at most sqrt(K/n).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "comgap/bound_core.hpp"
#include "comgap/markov_core.hpp"
#include "comgap/sampling.hpp"

namespace comgap::lis {

/// Values levels[i] / m. Comparisons on levels are exact.
struct GridSequence {
  int m = 1;
  std::vector<int> levels;

  std::size_t size() const { return levels.size(); }
  double value(std::size_t i) const { return static_cast<double>(levels[i]) / m; }
  friend bool operator==(const GridSequence&, const GridSequence&) = default;
};

GridSequence make_grid_sequence(int m, std::vector<int> levels);
GridSequence random_grid_sequence(int m, int n, Rng& rng);

/// Longest strictly increasing subsequence by patience sorting, O(n log n).
template <class T>
std::size_t lis_length(std::span<const T> seq) {
  if (seq.empty()) throw std::invalid_argument("lis_length: empty sequence");
  std::vector<T> tails;
  tails.reserve(seq.size());
  for (const T& x : seq) {
    // lower_bound: an equal value replaces a pile top instead of extending.
    const auto it = std::lower_bound(tails.begin(), tails.end(), x);
    if (it == tails.end()) {
      tails.push_back(x);
    } else {
      *it = x;
    }
  }
  return tails.size();
}

inline std::size_t lis_length(const GridSequence& seq) {
  return lis_length(std::span<const int>(seq.levels));
}

template <class T>
std::size_t truncated_lis(std::span<const T> seq, int k) {
  if (k < 1) throw std::invalid_argument("truncated_lis: K must be >= 1");
  return std::min(static_cast<std::size_t>(k), lis_length(seq));
}

inline std::size_t truncated_lis(const GridSequence& seq, int k) {
  return truncated_lis(std::span<const int>(seq.levels), k);
}

/// Replacement chain with the row normalization 1/((m+1) n); self-replacement
/// outcomes are merged into one neighbor entry of mass 1/(m+1).
ImplicitKernel<GridSequence> replacement_kernel(int m, int n);

struct DenseReplacement {
  int m = 0;
  int n = 0;
  std::vector<GridSequence> states;  // state id = sum_i levels[i] (m+1)^i
  DenseKernel kernel;
  FiniteMeasure mu;
};

std::size_t grid_index(const GridSequence& seq);
GridSequence grid_from_index(int m, int n, std::size_t index);
DenseReplacement build_dense_replacement(int m, int n, std::size_t cap = kDefaultStateCap);

/// Squared asymmetric one-step deviation of min(K, LIS) at state x.
double delta_state(const GridSequence& x, int k, const ImplicitKernel<GridSequence>& kernel);

struct LisExperimentConfig {
  int m = 1000000;
  int n = 400;
  std::optional<int> k;  // when absent, K = round(u sqrt(n))
  double u = 2.5;
  std::vector<double> t_levels{0.5, 1.0, 2.0};
  std::size_t n_samples = 100000;
  std::uint64_t seed = 0;
  Centering centering = Centering::independent_run;
  double tol = 1e-10;
};

/// Validated truncation level. Throws std::invalid_argument on bad ranges.
int resolve_k(const LisExperimentConfig& config);

/// gap = 1/n, lip = sqrt(K/n) (both analytic; lip is an upper bound, so the
/// reported xi = 2/sqrt(K) is a lower bound on the true rate). Levels are
/// a = t n^{1/4}.
TailReport lis_corollary_bound(const LisExperimentConfig& config);

/// n -> infinity value of the closed-form bound with K/sqrt(n) -> u.
double lis_limit_log_bound(double t, double u);

struct LisLevelResult {
  double t = 0.0;
  double a = 0.0;
  TailEstimate tail;
  double log_bound_direct = 0.0;
  double log_bound_closed = 0.0;
  double limit_log_bound = 0.0;
  bool dominated = false;
};

struct LisExperimentResult {
  int k = 0;
  double u = 0.0;
  TailReport report;
  MeanEstimate centering;
  double mean_lis_over_sqrt_n = 0.0;
  std::vector<LisLevelResult> levels;

  bool all_dominated() const {
    return std::all_of(levels.begin(), levels.end(), [](const auto& l) { return l.dominated; });
  }
};

/// IID uniform draws from A_m^n; domination means
/// estimate - 4 std_error <= exp(min(direct, closed)).
LisExperimentResult lis_experiment(const LisExperimentConfig& config);

}  // namespace comgap::lis
