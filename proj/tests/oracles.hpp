#pragma once
// Independent reference computations used only by the tests. None of these
// share code with the library routines they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

/// kappa = sum_{n>=1} 2^n sum_{m>=1} 4^{-mn}/m, summed in 50-digit arithmetic.
inline double kappa_double_series(int n_terms = 120, int m_terms = 120) {
  Big total = 0;
  for (int n = 1; n <= n_terms; ++n) {
    Big inner = 0;
    const Big q = boost::multiprecision::pow(Big(4), -n);
    Big qm = q;
    for (int m = 1; m <= m_terms; ++m) {
      inner += qm / m;
      qm *= q;
    }
    total += boost::multiprecision::pow(Big(2), n) * inner;
  }
  return static_cast<double>(total);
}

/// First `terms` summands of Theta in long double.
inline double theta_partial(double t, int terms = 10000) {
  long double sum = 0.0L;
  long double scale = 1.0L;  // 4^-n
  for (int n = 0; n < terms; ++n) {
    const long double x = static_cast<long double>(t) * scale;
    if (x == 0.0L) break;
    sum += std::ldexp(1.0L, n) * -std::log1p(-x);
    scale /= 4.0L;
  }
  return static_cast<double>(sum);
}

/// sup over a uniform grid of step h in [0,1) of lambda x + ln(1 - lambda^2),
/// followed by a refinement grid around the maximizer.
inline double legendre_grid(double x, double h = 1e-4) {
  auto obj = [x](double l) { return l * x + std::log1p(-l * l); };
  double best = 0.0;
  double arg = 0.0;
  const int steps = static_cast<int>(1.0 / h);
  for (int i = 0; i < steps; ++i) {
    const double l = i * h;
    if (obj(l) > best) {
      best = obj(l);
      arg = l;
    }
  }
  const double lo = std::max(0.0, arg - h);
  const double hi = std::min(1.0 - 1e-14, arg + h);
  for (int i = 0; i <= 20000; ++i) best = std::max(best, obj(lo + (hi - lo) * i / 20000.0));
  return best;
}

/// Midpoint Riemann sum of exp(log_f) on [0, upper] with `points` cells.
template <class F>
double riemann(const F& log_f, double upper, std::size_t points = 1000000) {
  const double h = upper / static_cast<double>(points);
  long double acc = 0.0L;
  for (std::size_t i = 0; i < points; ++i) acc += std::exp(log_f((i + 0.5) * h));
  return static_cast<double>(acc * h);
}

/// Direct O(N^2) unitary DFT.
inline std::vector<std::complex<double>> dft_direct(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<long double> acc = 0.0L;
    for (std::size_t t = 0; t < n; ++t) {
      const long double ang = -2.0L * std::numbers::pi_v<long double> *
                              static_cast<long double>((k * t) % n) / static_cast<long double>(n);
      acc += static_cast<long double>(x[t]) * std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    out[k] = std::complex<double>(acc) / std::sqrt(static_cast<double>(n));
  }
  return out;
}

/// O(n^2) longest strictly increasing subsequence.
template <class T>
std::size_t lis_dp(const std::vector<T>& x) {
  std::vector<std::size_t> l(x.size(), 1);
  std::size_t best = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (x[j] < x[i]) l[i] = std::max(l[i], l[j] + 1);
    }
    best = std::max(best, l[i]);
  }
  return best;
}

/// Eigenvalues of sqrt(mu) P / sqrt(mu), descending, through Eigen.
inline std::vector<double> symmetrized_eigenvalues(const std::vector<double>& mu,
                                                   const std::vector<double>& p) {
  const auto n = static_cast<Eigen::Index>(mu.size());
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      s(x, y) = std::sqrt(mu[x]) * p[x * n + y] / std::sqrt(mu[y]);
    }
  }
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

/// Two-pass weighted variance.
inline double variance_two_pass(const std::vector<double>& w, const std::vector<double>& f) {
  long double mean = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i) mean += static_cast<long double>(w[i]) * f[i];
  long double var = 0.0L;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const long double d = f[i] - mean;
    var += static_cast<long double>(w[i]) * d * d;
  }
  return static_cast<double>(var);
}

}  // namespace oracle
