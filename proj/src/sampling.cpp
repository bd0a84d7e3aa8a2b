#include "comgap/sampling.hpp"

#include <stdexcept>

namespace comgap {

MeanEstimate estimate_mean(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("estimate_mean: no samples");
  MeanEstimate out;
  out.n = samples.size();
  double sum = 0.0;
  for (double v : samples) sum += v;
  out.mean = sum / static_cast<double>(out.n);
  if (out.n > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - out.mean) * (v - out.mean);
    out.std_error = std::sqrt(ss / static_cast<double>(out.n - 1) / static_cast<double>(out.n));
  }
  return out;
}

std::vector<TailEstimate> tail_estimates(std::span<const double> samples,
                                         const MeanEstimate& centering,
                                         std::span<const double> levels) {
  if (samples.empty()) throw std::invalid_argument("tail_estimates: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());

  auto fraction_at_least = [&](double mean, double a) {
    const auto it = std::partition_point(sorted.begin(), sorted.end(),
                                         [&](double x) { return x - mean < a; });
    return static_cast<double>(sorted.end() - it) / n;
  };

  std::vector<TailEstimate> out;
  out.reserve(levels.size());
  for (double a : levels) {
    TailEstimate est;
    est.level = a;
    est.estimate = fraction_at_least(centering.mean, a);
    const double binom = est.estimate * (1.0 - est.estimate) / n;
    const double shift = 0.5 * (fraction_at_least(centering.mean - centering.std_error, a) -
                                fraction_at_least(centering.mean + centering.std_error, a));
    est.std_error = std::sqrt(binom + shift * shift);
    out.push_back(est);
  }
  return out;
}

}  // namespace comgap
