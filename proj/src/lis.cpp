#include "comgap/lis.hpp"

#include <cmath>
#include <string>

namespace comgap::lis {

namespace {

void require_mn(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("lis: m and n must be >= 1");
}

std::size_t checked_state_count(int m, int n, std::size_t cap) {
  std::size_t count = 1;
  for (int i = 0; i < n; ++i) {
    count *= static_cast<std::size_t>(m + 1);
    if (count > cap) {
      throw std::length_error("lis: (m+1)^n exceeds the dense state cap " + std::to_string(cap));
    }
  }
  return count;
}

}  // namespace

GridSequence make_grid_sequence(int m, std::vector<int> levels) {
  require_mn(m, levels.empty() ? 0 : 1);
  for (int v : levels) {
    if (v < 0 || v > m) throw std::invalid_argument("GridSequence: level outside [0, m]");
  }
  return GridSequence{m, std::move(levels)};
}

GridSequence random_grid_sequence(int m, int n, Rng& rng) {
  GridSequence seq{m, std::vector<int>(static_cast<std::size_t>(n))};
  std::uniform_int_distribution<int> level(0, m);
  for (int& v : seq.levels) v = level(rng);
  return seq;
}

ImplicitKernel<GridSequence> replacement_kernel(int m, int n) {
  require_mn(m, n);
  ImplicitKernel<GridSequence> kernel;
  kernel.description = "coordinate replacement on A_" + std::to_string(m) + "^" + std::to_string(n);
  kernel.step = [m, n](const GridSequence& x, Rng& rng) {
    GridSequence y = x;
    const std::size_t i = uniform_index(rng, static_cast<std::size_t>(n));
    y.levels[i] = std::uniform_int_distribution<int>(0, m)(rng);
    return y;
  };
  kernel.neighbors = [m, n](const GridSequence& x) {
    const double p = 1.0 / (static_cast<double>(n) * (m + 1));
    std::vector<Transition<GridSequence>> out;
    out.reserve(static_cast<std::size_t>(n) * m + 1);
    out.push_back({x, 1.0 / (m + 1)});
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (int v = 0; v <= m; ++v) {
        if (v == x.levels[i]) continue;
        GridSequence y = x;
        y.levels[i] = v;
        out.push_back({std::move(y), p});
      }
    }
    return out;
  };
  return kernel;
}

std::size_t grid_index(const GridSequence& seq) {
  std::size_t idx = 0;
  for (std::size_t i = seq.size(); i-- > 0;) {
    idx = idx * static_cast<std::size_t>(seq.m + 1) + static_cast<std::size_t>(seq.levels[i]);
  }
  return idx;
}

GridSequence grid_from_index(int m, int n, std::size_t index) {
  GridSequence seq{m, std::vector<int>(static_cast<std::size_t>(n))};
  for (int& v : seq.levels) {
    v = static_cast<int>(index % static_cast<std::size_t>(m + 1));
    index /= static_cast<std::size_t>(m + 1);
  }
  return seq;
}

DenseReplacement build_dense_replacement(int m, int n, std::size_t cap) {
  require_mn(m, n);
  const std::size_t count = checked_state_count(m, n, cap);
  DenseReplacement out;
  out.m = m;
  out.n = n;
  out.states.reserve(count);
  for (std::size_t s = 0; s < count; ++s) out.states.push_back(grid_from_index(m, n, s));

  const double p = 1.0 / (static_cast<double>(n) * (m + 1));
  std::vector<double> entries(count * count, 0.0);
  for (std::size_t s = 0; s < count; ++s) {
    GridSequence y = out.states[s];
    for (std::size_t i = 0; i < y.size(); ++i) {
      const int keep = y.levels[i];
      for (int v = 0; v <= m; ++v) {
        y.levels[i] = v;
        entries[s * count + grid_index(y)] += p;
      }
      y.levels[i] = keep;
    }
  }
  out.kernel = DenseKernel(count, std::move(entries));
  out.mu = FiniteMeasure::uniform(count);
  return out;
}

double delta_state(const GridSequence& x, int k, const ImplicitKernel<GridSequence>& kernel) {
  const auto fx = static_cast<double>(truncated_lis(x, k));
  double acc = 0.0;
  for (const auto& tr : kernel.neighbors(x)) {
    const double d = fx - static_cast<double>(truncated_lis(tr.to, k));
    if (d > 0.0) acc += tr.prob * d * d;
  }
  return acc;
}

int resolve_k(const LisExperimentConfig& config) {
  require_mn(config.m, config.n);
  if (config.k) {
    if (*config.k < 1) throw std::invalid_argument("lis: K must be >= 1");
    return *config.k;
  }
  if (!(config.u > 2.0)) throw std::invalid_argument("lis: u must exceed 2");
  const auto k = static_cast<int>(std::lround(config.u * std::sqrt(static_cast<double>(config.n))));
  return std::max(k, 1);
}

TailReport lis_corollary_bound(const LisExperimentConfig& config) {
  const int k = resolve_k(config);
  const double n = config.n;
  const auto ing = make_ingredients(1.0 / n, std::sqrt(static_cast<double>(k) / n), true);
  std::vector<double> levels;
  levels.reserve(config.t_levels.size());
  for (double t : config.t_levels) {
    if (!(t >= 0.0)) throw std::invalid_argument("lis: t levels must be >= 0");
    levels.push_back(t * std::pow(n, 0.25));
  }
  TailReport report = make_tail_report(ing, std::move(levels), config.tol);
  report.gap_provenance = "analytic (exact 1/n)";
  report.lip_provenance = "analytic upper bound sqrt(K/n)";
  return report;
}

double lis_limit_log_bound(double t, double u) {
  if (!(u > 0.0)) throw std::invalid_argument("lis_limit_log_bound: u must be positive");
  if (t == 0.0) return 0.0;
  return std::min(0.0, kappa(1e-10) - vartheta(2.0 * t / std::sqrt(u)));
}

LisExperimentResult lis_experiment(const LisExperimentConfig& config) {
  if (config.n_samples < 1) throw std::invalid_argument("lis: n_samples must be >= 1");
  LisExperimentResult result;
  result.k = resolve_k(config);
  result.u = config.k ? static_cast<double>(*config.k) / std::sqrt(static_cast<double>(config.n))
                      : config.u;
  result.report = lis_corollary_bound(config);

  const int m = config.m;
  const int n = config.n;
  auto draw_lis = [m, n](Rng& rng) {
    return static_cast<double>(lis_length(random_grid_sequence(m, n, rng)));
  };
  const auto raw = draw_samples(draw_lis, config.n_samples, config.seed, "tail");
  const double kk = result.k;
  std::vector<double> truncated(raw.size());
  std::transform(raw.begin(), raw.end(), truncated.begin(),
                 [kk](double v) { return std::min(kk, v); });

  result.mean_lis_over_sqrt_n = estimate_mean(raw).mean / std::sqrt(static_cast<double>(n));
  if (config.centering == Centering::same_run) {
    result.centering = estimate_mean(truncated);
  } else {
    auto mean_raw = draw_samples(draw_lis, config.n_samples, config.seed, "mean");
    for (double& v : mean_raw) v = std::min(kk, v);
    result.centering = estimate_mean(mean_raw);
  }

  const auto tails = tail_estimates(truncated, result.centering, result.report.levels);
  for (std::size_t i = 0; i < tails.size(); ++i) {
    LisLevelResult lv;
    lv.t = config.t_levels[i];
    lv.a = result.report.levels[i];
    lv.tail = tails[i];
    lv.log_bound_direct = result.report.log_bound_direct[i];
    lv.log_bound_closed = result.report.log_bound_closed[i];
    lv.limit_log_bound = lis_limit_log_bound(lv.t, result.u);
    const double bound = std::exp(std::min(lv.log_bound_direct, lv.log_bound_closed));
    lv.dominated = lv.tail.estimate - 4.0 * lv.tail.std_error <= bound;
    result.levels.push_back(lv);
  }
  return result;
}

}  // namespace comgap::lis
