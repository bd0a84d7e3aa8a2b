#include "comgap/glauber_tfa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace comgap::glauber {

namespace {

void require_path(const ChainSpec1D& spec, const Path& path) {
  if (path.empty()) throw std::invalid_argument("path must have at least one site");
  for (int s : path) {
    if (s < 0 || static_cast<std::size_t>(s) >= spec.size()) {
      throw std::invalid_argument("path entry outside the state space");
    }
  }
}

std::size_t ipow_checked(std::size_t base, int exponent, std::size_t cap) {
  std::size_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    out *= base;
    if (out > cap) {
      throw std::length_error("glauber: |Y|^(n+1) exceeds the dense state cap " +
                              std::to_string(cap));
    }
  }
  return out;
}

std::vector<double> cumulative(std::span<const double> w) {
  std::vector<double> cdf(w.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    cdf[i] = acc;
  }
  return cdf;
}

/// Unnormalized site weights; the caller normalizes.
std::vector<double> site_weights(const ChainSpec1D& spec, const Path& path, std::size_t t) {
  const std::size_t k = spec.size();
  const std::size_t last = path.size() - 1;
  std::vector<double> w(k);
  for (std::size_t y = 0; y < k; ++y) {
    if (last == 0) {
      w[y] = spec.nu[y];
    } else if (t == 0) {
      w[y] = spec.nu[y] * spec.q(y, static_cast<std::size_t>(path[1]));
    } else if (t == last) {
      w[y] = spec.q(static_cast<std::size_t>(path[last - 1]), y);
    } else {
      w[y] = spec.q(static_cast<std::size_t>(path[t - 1]), y) *
             spec.q(y, static_cast<std::size_t>(path[t + 1]));
    }
  }
  return w;
}

template <bool Parallel>
DenseGlauber build_dense(const ChainSpec1D& spec, int n, std::size_t cap) {
  if (n < 0) throw std::invalid_argument("build_dense_glauber: n must be >= 0");
  const std::size_t k = spec.size();
  const std::size_t sites = static_cast<std::size_t>(n) + 1;
  const std::size_t full = ipow_checked(k, n + 1, cap);

  std::vector<std::size_t> stride(sites, 1);
  for (std::size_t t = 1; t < sites; ++t) stride[t] = stride[t - 1] * k;

  DenseGlauber out;
  out.n = n;
  std::vector<std::ptrdiff_t> support_of(full, -1);
  std::vector<double> weights;
  Path path(sites);
  for (std::size_t idx = 0; idx < full; ++idx) {
    std::size_t rest = idx;
    for (std::size_t t = 0; t < sites; ++t) {
      path[t] = static_cast<int>(rest % k);
      rest /= k;
    }
    const double w = path_weight(spec, path);
    if (w > 0.0) {
      support_of[idx] = static_cast<std::ptrdiff_t>(out.states.size());
      out.states.push_back(path);
      weights.push_back(w);
    }
  }

  const std::size_t m = out.states.size();
  std::vector<double> entries(m * m, 0.0);
  const double site_prob = 1.0 / static_cast<double>(sites);
  auto fill_row = [&](std::size_t s) {
    const Path& x = out.states[s];
    std::size_t idx = 0;
    for (std::size_t t = 0; t < sites; ++t) idx += static_cast<std::size_t>(x[t]) * stride[t];
    double* row = entries.data() + s * m;
    for (std::size_t t = 0; t < sites; ++t) {
      const auto law = glauber_site_distribution(spec, x, t);
      const std::size_t base = idx - static_cast<std::size_t>(x[t]) * stride[t];
      for (std::size_t y = 0; y < k; ++y) {
        if (law[y] == 0.0) continue;
        const std::ptrdiff_t j = support_of[base + y * stride[t]];
        // A positive-probability move from a support path stays in the support.
        row[j] += site_prob * law[y];
      }
    }
  };

  const auto ms = static_cast<std::ptrdiff_t>(m);
  if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t s = 0; s < ms; ++s) fill_row(static_cast<std::size_t>(s));
  } else {
    for (std::ptrdiff_t s = 0; s < ms; ++s) fill_row(static_cast<std::size_t>(s));
  }
  out.kernel = DenseKernel(m, std::move(entries));
  out.mu = FiniteMeasure::from_unnormalized(std::move(weights));
  return out;
}

}  // namespace

double ChainSpec1D::radius() const {
  double r = 0.0;
  for (double v : values) r = std::max(r, std::abs(v));
  return r;
}

ChainSpec1D make_chain_spec(std::vector<double> values, DenseKernel q, FiniteMeasure nu) {
  if (values.size() != q.size() || values.size() != nu.size()) {
    throw std::invalid_argument("ChainSpec1D: values, Q and nu sizes differ");
  }
  if (values.size() < 2) throw std::invalid_argument("ChainSpec1D: need at least two states");
  if (!check_reversible(nu, q, 1e-12)) {
    throw std::invalid_argument("ChainSpec1D: nu is not reversible for Q");
  }
  if (!(spectral_gap(nu, q) > 0.0)) {
    throw std::invalid_argument("ChainSpec1D: Q has no spectral gap");
  }
  return ChainSpec1D{std::move(values), std::move(q), std::move(nu)};
}

std::vector<double> tfa_grid(int m, double eps) {
  if (m < 1 || !(eps > 0.0)) throw std::invalid_argument("tfa_grid: need m >= 1 and eps > 0");
  std::vector<double> out;
  for (int j = -m; j <= m; ++j) out.push_back(j * eps);
  return out;
}

ChainSpec1D birth_death_spec(std::vector<double> values) {
  const std::size_t k = values.size();
  if (k < 2) throw std::invalid_argument("birth_death_spec: need at least two states");
  std::vector<double> q(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    q[i * k + i] = 0.5;
    if (i > 0) {
      q[i * k + i - 1] = 0.25;
    } else {
      q[i * k + i] += 0.25;
    }
    if (i + 1 < k) {
      q[i * k + i + 1] = 0.25;
    } else {
      q[i * k + i] += 0.25;
    }
  }
  return make_chain_spec(std::move(values), DenseKernel(k, std::move(q)),
                         FiniteMeasure::uniform(k));
}

ChainSpec1D uniform_spec(std::vector<double> values) {
  const std::size_t k = values.size();
  if (k < 2) throw std::invalid_argument("uniform_spec: need at least two states");
  std::vector<double> q(k * k, 1.0 / static_cast<double>(k));
  return make_chain_spec(std::move(values), DenseKernel(k, std::move(q)),
                         FiniteMeasure::uniform(k));
}

ChainSpec1D default_tfa_spec() { return birth_death_spec(tfa_grid(2, 0.5)); }

std::vector<double> path_values(const ChainSpec1D& spec, const Path& path) {
  std::vector<double> out(path.size());
  for (std::size_t t = 0; t < path.size(); ++t) {
    out[t] = spec.values[static_cast<std::size_t>(path[t])];
  }
  return out;
}

double path_weight(const ChainSpec1D& spec, const Path& path) {
  require_path(spec, path);
  double w = spec.nu[static_cast<std::size_t>(path[0])];
  for (std::size_t t = 0; t + 1 < path.size(); ++t) {
    w *= spec.q(static_cast<std::size_t>(path[t]), static_cast<std::size_t>(path[t + 1]));
  }
  return w;
}

double path_weight_reversed(const ChainSpec1D& spec, const Path& path) {
  require_path(spec, path);
  const std::size_t last = path.size() - 1;
  double w = spec.nu[static_cast<std::size_t>(path[last])];
  for (std::size_t t = last; t > 0; --t) {
    w *= spec.q(static_cast<std::size_t>(path[t]), static_cast<std::size_t>(path[t - 1]));
  }
  return w;
}

double path_weight_anchored(const ChainSpec1D& spec, const Path& path, std::size_t t) {
  require_path(spec, path);
  if (t >= path.size()) throw std::invalid_argument("path_weight_anchored: t out of range");
  double w = spec.nu[static_cast<std::size_t>(path[t])];
  for (std::size_t s = t; s + 1 < path.size(); ++s) {
    w *= spec.q(static_cast<std::size_t>(path[s]), static_cast<std::size_t>(path[s + 1]));
  }
  for (std::size_t s = t; s > 0; --s) {
    w *= spec.q(static_cast<std::size_t>(path[s]), static_cast<std::size_t>(path[s - 1]));
  }
  return w;
}

PathSampler::PathSampler(const ChainSpec1D& spec) : nu_cdf_(cumulative(spec.nu.weights())) {
  row_cdf_.reserve(spec.size());
  for (std::size_t x = 0; x < spec.size(); ++x) row_cdf_.push_back(cumulative(spec.q.row(x)));
}

Path PathSampler::operator()(int n, Rng& rng) const {
  if (n < 0) throw std::invalid_argument("sample_path: n must be >= 0");
  Path path(static_cast<std::size_t>(n) + 1);
  path[0] = static_cast<int>(sample_cdf(nu_cdf_, rng));
  for (std::size_t t = 1; t < path.size(); ++t) {
    path[t] = static_cast<int>(sample_cdf(row_cdf_[static_cast<std::size_t>(path[t - 1])], rng));
  }
  return path;
}

Path sample_path(const ChainSpec1D& spec, int n, Rng& rng) { return PathSampler(spec)(n, rng); }

FiniteMeasure glauber_site_distribution(const ChainSpec1D& spec, const Path& path, std::size_t t) {
  require_path(spec, path);
  if (t >= path.size()) throw std::invalid_argument("glauber_site_distribution: t out of range");
  auto w = site_weights(spec, path, t);
  double total = 0.0;
  for (double v : w) total += v;
  if (!(total > 0.0)) {
    throw std::domain_error("glauber_site_distribution: zero normalizer (path has mu_n = 0)");
  }
  return FiniteMeasure::from_unnormalized(std::move(w));
}

FiniteMeasure glauber_left_site_reversed(const ChainSpec1D& spec, const Path& path) {
  require_path(spec, path);
  if (path.size() < 2) return spec.nu;
  const auto row = spec.q.row(static_cast<std::size_t>(path[1]));
  return FiniteMeasure::from_unnormalized(std::vector<double>(row.begin(), row.end()));
}

Path glauber_step(const ChainSpec1D& spec, const Path& path, Rng& rng) {
  const std::size_t t = uniform_index(rng, path.size());
  const auto law = glauber_site_distribution(spec, path, t);
  const auto cdf = cumulative(law.weights());
  Path next = path;
  next[t] = static_cast<int>(sample_cdf(cdf, rng));
  return next;
}

ImplicitKernel<Path> glauber_kernel(const ChainSpec1D& spec) {
  ImplicitKernel<Path> kernel;
  kernel.description = "heat-bath Glauber dynamics on paths";
  kernel.step = [spec](const Path& x, Rng& rng) { return glauber_step(spec, x, rng); };
  kernel.neighbors = [spec](const Path& x) {
    std::vector<Transition<Path>> out;
    const double site_prob = 1.0 / static_cast<double>(x.size());
    double self = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
      const auto law = glauber_site_distribution(spec, x, t);
      for (std::size_t y = 0; y < spec.size(); ++y) {
        if (law[y] == 0.0) continue;
        if (static_cast<int>(y) == x[t]) {
          self += site_prob * law[y];
          continue;
        }
        Path next = x;
        next[t] = static_cast<int>(y);
        out.push_back({std::move(next), site_prob * law[y]});
      }
    }
    out.push_back({x, self});
    return out;
  };
  return kernel;
}

DenseGlauber build_dense_glauber(const ChainSpec1D& spec, int n, std::size_t cap) {
  return build_dense<true>(spec, n, cap);
}

DenseGlauber build_dense_glauber_serial(const ChainSpec1D& spec, int n, std::size_t cap) {
  return build_dense<false>(spec, n, cap);
}

GapStudy gap_scaling_study(const ChainSpec1D& spec, std::span<const int> n_list, std::size_t cap) {
  if (n_list.empty()) throw std::invalid_argument("gap_scaling_study: empty n list");
  GapStudy study;
  study.lambda1_hat = std::numeric_limits<double>::infinity();
  for (int n : n_list) {
    if (n < 1) throw std::invalid_argument("gap_scaling_study: n must be >= 1");
    const auto dense = build_dense_glauber(spec, n, cap);
    const double gap = spectral_gap(dense.mu, dense.kernel);
    study.n.push_back(n);
    study.states.push_back(dense.states.size());
    study.gap.push_back(gap);
    study.scaled.push_back((n + 1) * gap);
    study.lambda1_hat = std::min(study.lambda1_hat, study.scaled.back());
  }
  return study;
}

void validate_band(const TfaBand& band, int n) {
  if (n < 0) throw std::invalid_argument("TfaBand: n must be >= 0");
  // 2b < n+1 is the integer form of b < (n+1)/2.
  if (!(band.a > 0 && band.a <= band.b && 2 * band.b < n + 1)) {
    throw std::invalid_argument("TfaBand: need 0 < a <= b < (n+1)/2, got a=" +
                                std::to_string(band.a) + " b=" + std::to_string(band.b) +
                                " n=" + std::to_string(n));
  }
}

double tfa_observable(std::span<const double> values, const TfaBand& band) {
  const int n = static_cast<int>(values.size()) - 1;
  validate_band(band, n);
  const auto coeffs = dft(values);
  double power = 0.0;
  for (int k = band.a; k <= band.b; ++k) power += std::norm(coeffs[static_cast<std::size_t>(k)]);
  return power / static_cast<double>(values.size());
}

TfaObservable::TfaObservable(int n, TfaBand band) : n_(n), band_(band) {
  validate_band(band, n);
  const std::size_t len = static_cast<std::size_t>(n) + 1;
  const std::size_t width = static_cast<std::size_t>(band.b - band.a + 1);
  cos_.resize(width * len);
  sin_.resize(width * len);
  for (std::size_t j = 0; j < width; ++j) {
    const auto k = static_cast<std::size_t>(band.a) + j;
    for (std::size_t t = 0; t < len; ++t) {
      // Reduce k t mod N first so the angle stays small and exact.
      const double angle =
          2.0 * std::numbers::pi * static_cast<double>((k * t) % len) / static_cast<double>(len);
      cos_[j * len + t] = std::cos(angle);
      sin_[j * len + t] = std::sin(angle);
    }
  }
}

double TfaObservable::operator()(std::span<const double> values) const {
  const std::size_t len = static_cast<std::size_t>(n_) + 1;
  if (values.size() != len) throw std::invalid_argument("TfaObservable: wrong signal length");
  const std::size_t width = cos_.size() / len;
  double power = 0.0;
  for (std::size_t j = 0; j < width; ++j) {
    double re = 0.0;
    double im = 0.0;
    const double* c = cos_.data() + j * len;
    const double* s = sin_.data() + j * len;
    for (std::size_t t = 0; t < len; ++t) {
      re += c[t] * values[t];
      im -= s[t] * values[t];
    }
    power += re * re + im * im;
  }
  // |phi(k)|^2 carries 1/N, and the observable another 1/N.
  const double nn = static_cast<double>(len);
  return power / (nn * nn);
}

double tfa_lip_bound(double radius, int n) {
  if (n < 0 || !(radius >= 0.0)) throw std::invalid_argument("tfa_lip_bound: bad arguments");
  return 2.0 * radius * radius / static_cast<double>(n + 1);
}

double tfa_delta_state(const ChainSpec1D& spec, const Path& path, const TfaBand& band,
                       bool asymmetric) {
  require_path(spec, path);
  auto values = path_values(spec, path);
  const int n = static_cast<int>(path.size()) - 1;
  const TfaObservable f(n, band);
  const double fx = f(values);
  const double site_prob = 1.0 / static_cast<double>(path.size());
  double acc = 0.0;
  for (std::size_t t = 0; t < path.size(); ++t) {
    const auto law = glauber_site_distribution(spec, path, t);
    const double keep = values[t];
    for (std::size_t y = 0; y < spec.size(); ++y) {
      if (law[y] == 0.0) continue;
      values[t] = spec.values[y];
      const double d = fx - f(values);
      if (!asymmetric || d > 0.0) acc += site_prob * law[y] * d * d;
    }
    values[t] = keep;
  }
  return acc;
}

TailReport tfa_corollary_bound(const ChainSpec1D& spec, int n, double lambda1_hat,
                               std::span<const double> a_levels, double tol) {
  if (!(lambda1_hat > 0.0)) throw std::domain_error("tfa_corollary_bound: lambda1 must be > 0");
  if (n < 0) throw std::invalid_argument("tfa_corollary_bound: n must be >= 0");
  const double np1 = n + 1;
  const auto ing = make_ingredients(lambda1_hat / np1, tfa_lip_bound(spec.radius(), n), false);
  std::vector<double> levels;
  for (double a : a_levels) {
    if (!(a >= 0.0)) throw std::invalid_argument("tfa_corollary_bound: levels must be >= 0");
    levels.push_back(a / std::sqrt(np1));
  }
  TailReport report = make_tail_report(ing, std::move(levels), tol);
  report.gap_provenance = "empirical lambda1";
  report.lip_provenance = "analytic upper bound 2R^2/(n+1)";
  return report;
}

bool TfaExperimentResult::all_dominated() const {
  return std::all_of(levels.begin(), levels.end(), [](const auto& l) { return l.dominated; });
}

TfaExperimentResult tfa_experiment(const TfaExperimentConfig& config) {
  validate_band(config.band, config.n);
  if (config.n_samples < 1) throw std::invalid_argument("tfa: n_samples must be >= 1");
  TfaExperimentResult result;
  if (config.lambda1) {
    if (!(*config.lambda1 > 0.0)) throw std::domain_error("tfa: lambda1 must be > 0");
    result.lambda1_hat = *config.lambda1;
    result.lambda1_provenance = "empirical lambda1 (user override)";
  } else {
    result.study = gap_scaling_study(config.spec, config.study_n);
    result.lambda1_hat = result.study->lambda1_hat;
    result.lambda1_provenance = "empirical lambda1 (min (n+1)*gap over dense study)";
  }
  result.report =
      tfa_corollary_bound(config.spec, config.n, result.lambda1_hat, config.a_levels, config.tol);

  const PathSampler sampler(config.spec);
  const TfaObservable f(config.n, config.band);
  const int n = config.n;
  const auto& spec = config.spec;
  auto draw = [&](Rng& rng) { return f(path_values(spec, sampler(n, rng))); };
  const auto tail = draw_samples(draw, config.n_samples, config.seed, "tail");
  result.centering = config.centering == Centering::same_run
                         ? estimate_mean(tail)
                         : estimate_mean(draw_samples(draw, config.n_samples, config.seed, "mean"));
  const auto tails = tail_estimates(tail, result.centering, result.report.levels);

  for (std::size_t i = 0; i < tails.size(); ++i) {
    TfaLevelResult lv;
    lv.a = config.a_levels[i];
    lv.level = result.report.levels[i];
    lv.vartheta_argument = lv.level * result.report.ingredients.xi;
    lv.tail = tails[i];
    lv.log_bound_direct = result.report.log_bound_direct[i];
    lv.log_bound_closed = result.report.log_bound_closed[i];
    const double bound = std::exp(std::min(lv.log_bound_direct, lv.log_bound_closed));
    lv.dominated = lv.tail.estimate - 4.0 * lv.tail.std_error <= bound;
    result.levels.push_back(lv);
  }
  return result;
}

}  // namespace comgap::glauber
