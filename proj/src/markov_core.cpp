#include "comgap/markov_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace comgap {

namespace {

constexpr double kSumTol = 1e-12;

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string("dimension mismatch: ") + what);
}

void require_compatible(const FiniteMeasure& mu, const DenseKernel& p) {
  require_same_size(mu.size(), p.size(), "measure vs kernel");
}

}  // namespace

FiniteMeasure::FiniteMeasure(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("FiniteMeasure: empty");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("FiniteMeasure: negative or non-finite weight");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kSumTol) {
    throw std::invalid_argument("FiniteMeasure: weights do not sum to 1");
  }
}

FiniteMeasure FiniteMeasure::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("FiniteMeasure::uniform: n == 0");
  return FiniteMeasure(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

FiniteMeasure FiniteMeasure::from_unnormalized(std::vector<double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw std::invalid_argument("FiniteMeasure: nonpositive total weight");
  for (double& w : weights) w /= total;
  return FiniteMeasure(std::move(weights));
}

bool FiniteMeasure::nondegenerate() const {
  return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w > 0.0; });
}

double FiniteMeasure::expectation(std::span<const double> f) const {
  require_same_size(f.size(), size(), "observable vs measure");
  double acc = 0.0;
  for (std::size_t x = 0; x < size(); ++x) acc += f[x] * weights_[x];
  return acc;
}

DenseKernel::DenseKernel(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n_ == 0 || entries_.size() != n_ * n_) {
    throw std::invalid_argument("DenseKernel: entries must form a nonempty square matrix");
  }
  for (std::size_t x = 0; x < n_; ++x) {
    double total = 0.0;
    for (std::size_t y = 0; y < n_; ++y) {
      const double v = entries_[x * n_ + y];
      if (!(v >= 0.0)) throw std::invalid_argument("DenseKernel: negative entry");
      total += v;
    }
    if (std::abs(total - 1.0) > kSumTol) {
      throw std::invalid_argument("DenseKernel: row " + std::to_string(x) + " does not sum to 1");
    }
  }
}

double stationarity_residual(const FiniteMeasure& mu, const DenseKernel& p) {
  require_compatible(mu, p);
  const std::size_t n = p.size();
  std::vector<double> pushed(n, 0.0);
  for (std::size_t y = 0; y < n; ++y) {
    const auto row = p.row(y);
    for (std::size_t x = 0; x < n; ++x) pushed[x] += mu[y] * row[x];
  }
  double worst = 0.0;
  for (std::size_t x = 0; x < n; ++x) worst = std::max(worst, std::abs(mu[x] - pushed[x]));
  return worst;
}

bool check_stationary(const FiniteMeasure& mu, const DenseKernel& p, double tol) {
  return stationarity_residual(mu, p) <= tol;
}

double reversibility_residual(const FiniteMeasure& mu, const DenseKernel& p) {
  require_compatible(mu, p);
  const std::size_t n = p.size();
  double worst = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      worst = std::max(worst, std::abs(mu[x] * p(x, y) - mu[y] * p(y, x)));
    }
  }
  return worst;
}

bool check_reversible(const FiniteMeasure& mu, const DenseKernel& p, double tol) {
  return reversibility_residual(mu, p) <= tol;
}

double dirichlet_form(const FiniteMeasure& mu, const DenseKernel& p, std::span<const double> f,
                      std::span<const double> g) {
  require_compatible(mu, p);
  require_same_size(f.size(), p.size(), "f");
  require_same_size(g.size(), p.size(), "g");
  double acc = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    const auto row = p.row(x);
    double inner = 0.0;
    for (std::size_t y = 0; y < p.size(); ++y) {
      if (row[y] == 0.0) continue;
      inner += (f[x] - f[y]) * (g[x] - g[y]) * row[y];
    }
    acc += inner * mu[x];
  }
  return 0.5 * acc;
}

double dirichlet_form_generator(const FiniteMeasure& mu, const DenseKernel& p,
                                std::span<const double> f, std::span<const double> g) {
  require_compatible(mu, p);
  require_same_size(f.size(), p.size(), "f");
  require_same_size(g.size(), p.size(), "g");
  double acc = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    const auto row = p.row(x);
    double pg = 0.0;
    for (std::size_t y = 0; y < p.size(); ++y) pg += row[y] * g[y];
    acc += f[x] * (g[x] - pg) * mu[x];
  }
  return acc;
}

double variance(const FiniteMeasure& mu, std::span<const double> f) {
  const double mean = mu.expectation(f);
  double acc = 0.0;
  for (std::size_t x = 0; x < mu.size(); ++x) {
    const double d = f[x] - mean;
    acc += d * d * mu[x];
  }
  return acc;
}

Spectrum spectrum(const FiniteMeasure& mu, const DenseKernel& p) {
  require_compatible(mu, p);
  const std::size_t n = p.size();
  if (n < 2) throw std::domain_error("spectrum: need at least two states");
  if (!mu.nondegenerate()) throw std::domain_error("spectrum: degenerate measure");
  if (!check_reversible(mu, p, 1e-10)) {
    throw std::domain_error("spectrum: kernel is not reversible for the measure");
  }
  std::vector<double> sq(n);
  for (std::size_t x = 0; x < n; ++x) sq[x] = std::sqrt(mu[x]);
  std::vector<double> s(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x; y < n; ++y) {
      // Average the two triangles so rounding cannot break symmetry.
      const double a = sq[x] * p(x, y) / sq[y];
      const double b = sq[y] * p(y, x) / sq[x];
      s[x * n + y] = s[y * n + x] = 0.5 * (a + b);
    }
  }
  Spectrum out;
  out.eigenvalues = symmetric_eigenvalues(std::move(s), n);
  out.gap = 1.0 - out.eigenvalues[1];
  out.most_negative = out.eigenvalues.back();
  return out;
}

double spectral_gap(const FiniteMeasure& mu, const DenseKernel& p) { return spectrum(mu, p).gap; }

double one_step_deviation_sq(const DenseKernel& p, std::span<const double> f, std::size_t x,
                             bool asymmetric) {
  const auto row = p.row(x);
  const double fx = f[x];
  double acc = 0.0;
  for (std::size_t y = 0; y < p.size(); ++y) {
    if (row[y] == 0.0) continue;
    const double d = fx - f[y];
    if (asymmetric && !(d > 0.0)) continue;
    acc += row[y] * d * d;
  }
  return acc;
}

LipResult lip_constant_serial(const DenseKernel& p, std::span<const double> f, bool asymmetric) {
  require_same_size(f.size(), p.size(), "f");
  LipResult out;
  double best = -1.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double v = one_step_deviation_sq(p, f, x, asymmetric);
    if (v > best) {
      best = v;
      out.argmax = x;
    }
  }
  out.value = std::sqrt(best);
  return out;
}

LipResult lip_constant(const DenseKernel& p, std::span<const double> f, bool asymmetric) {
  require_same_size(f.size(), p.size(), "f");
  const auto n = static_cast<std::ptrdiff_t>(p.size());
  std::vector<double> per_state(p.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t x = 0; x < n; ++x) {
    per_state[static_cast<std::size_t>(x)] =
        one_step_deviation_sq(p, f, static_cast<std::size_t>(x), asymmetric);
  }
  // First maximal index, matching the serial scan.
  const auto it = std::max_element(per_state.begin(), per_state.end());
  LipResult out;
  out.argmax = static_cast<std::size_t>(it - per_state.begin());
  out.value = std::sqrt(*it);
  return out;
}

double t_step_asym_deviation(const FiniteMeasure& mu, const DenseKernel& p,
                             std::span<const double> f, int t, std::size_t cap) {
  require_compatible(mu, p);
  require_same_size(f.size(), p.size(), "f");
  if (t < 0) throw std::invalid_argument("t_step_asym_deviation: t must be >= 0");
  const std::size_t n = p.size();
  if (n > cap) throw std::length_error("t_step_asym_deviation: state space exceeds cap");
  if (t == 0) return 0.0;

  std::vector<double> power(p.entries().begin(), p.entries().end());
  std::vector<double> next(n * n);
  for (int step = 1; step < t; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t k = 0; k < n; ++k) {
        const double a = power[x * n + k];
        if (a == 0.0) continue;
        const auto row = p.row(k);
        for (std::size_t y = 0; y < n; ++y) next[x * n + y] += a * row[y];
      }
    }
    power.swap(next);
  }
  double acc = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const double d = f[x] - f[y];
      if (d > 0.0) acc += mu[x] * power[x * n + y] * d * d;
    }
  }
  return std::sqrt(acc);
}

Fluctuations exact_fluctuations(const FiniteMeasure& mu, std::span<const double> f, double a) {
  const double mean = mu.expectation(f);
  Fluctuations out;
  for (std::size_t x = 0; x < mu.size(); ++x) {
    const double d = f[x] - mean;
    if (d >= a) out.plus += mu[x];
    if (-d >= a) out.minus += mu[x];
  }
  return out;
}

namespace {

/// int_0^inf mu{dev >= s} ds for a step function with jumps at the deviations.
double integrate_upper_tail(std::vector<std::pair<double, double>> dev_weight) {
  std::sort(dev_weight.begin(), dev_weight.end(),
            [](const auto& l, const auto& r) { return l.first > r.first; });
  // Walk breakpoints from the largest deviation down to 0; on (d_{k+1}, d_k]
  // the tail equals the mass accumulated so far.
  double integral = 0.0;
  double mass = 0.0;
  for (std::size_t k = 0; k < dev_weight.size(); ++k) {
    const double d = dev_weight[k].first;
    if (d <= 0.0) break;
    mass += dev_weight[k].second;
    const double lower =
        (k + 1 < dev_weight.size()) ? std::max(0.0, dev_weight[k + 1].first) : 0.0;
    integral += mass * (d - lower);
  }
  return integral;
}

}  // namespace

Fluctuations fluctuation_integrals(const FiniteMeasure& mu, std::span<const double> f) {
  const double mean = mu.expectation(f);
  std::vector<std::pair<double, double>> up;
  std::vector<std::pair<double, double>> down;
  up.reserve(mu.size());
  down.reserve(mu.size());
  for (std::size_t x = 0; x < mu.size(); ++x) {
    up.emplace_back(f[x] - mean, mu[x]);
    down.emplace_back(mean - f[x], mu[x]);
  }
  return {integrate_upper_tail(std::move(up)), integrate_upper_tail(std::move(down))};
}

ReversibleChain random_reversible_chain(std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("random_reversible_chain: n == 0");
  std::vector<double> w(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x; y < n; ++y) w[x * n + y] = w[y * n + x] = 0.05 + uniform01(rng);
  }
  std::vector<double> rowsum(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) rowsum[x] += w[x * n + y];
  }
  for (std::size_t x = 0; x < n; ++x) {
    double total = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      w[x * n + y] /= rowsum[x];
      total += w[x * n + y];
    }
    // Push the rounding residue onto the diagonal so the row sums to 1.
    w[x * n + x] += 1.0 - total;
  }
  return {FiniteMeasure::from_unnormalized(rowsum), DenseKernel(n, std::move(w))};
}

}  // namespace comgap
