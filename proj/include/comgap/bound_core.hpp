#pragma once

// Special functions of the spectral-gap concentration method and the tail
// bounds assembled from them.
//
//   Theta(t) = sum_{n>=0} 2^n ln(1 / (1 - t 4^-n)),          0 <= t < 1
//   kappa    = sum_{m>=1} 2 / (m (4^m - 2))  ~= 1.0846
//   phi(x)   = sqrt(1 + 1/x^2) - 1/x
//   vartheta(x) = x phi(x) + ln((2/x) phi(x))
//
// With Xi = 2 sqrt(gap) / lip, the positive fluctuation F+(a) obeys
//   ln F+(a) <= -max_{0<=lambda<Xi} (lambda a - Theta(lambda / Xi))   (direct)
//   ln F+(a) <= kappa - vartheta(a Xi)                               (closed)
// Every log-bound returned here is clamped to <= 0.

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace comgap {

/// Raised when a positive-tail bound does not decay, so its integral diverges.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncated series together with a certified bound on the omitted tail.
struct SeriesValue {
  double value = 0.0;
  double error_bound = 0.0;
  std::size_t terms = 0;
};

SeriesValue kappa_series(double tol);
double kappa(double tol = 1e-12);

/// kappa through sum_{n>=1} 2^n ln(1/(1-4^-n)); second route for cross-checks.
SeriesValue kappa_log_series(double tol);

SeriesValue theta_series(double t, double tol);
double theta(double t, double tol = 1e-14);

double phi(double x);
double vartheta(double x);

struct BoundIngredients {
  double gap = 0.0;
  double lip = 0.0;
  double xi = 0.0;
  bool asymmetric = false;
};

BoundIngredients make_ingredients(double gap, double lip, bool asymmetric);

double tail_bound_direct(const BoundIngredients& ing, double a, double tol = 1e-10);
double tail_bound_closed(const BoundIngredients& ing, double a);

struct TailReport {
  BoundIngredients ingredients;
  std::vector<double> levels;
  std::vector<double> log_bound_direct;
  std::vector<double> log_bound_closed;
  /// "analytic" or "empirical" for gap and lip respectively.
  std::string gap_provenance = "analytic";
  std::string lip_provenance = "analytic";
};

TailReport make_tail_report(const BoundIngredients& ing, std::vector<double> levels,
                            double tol = 1e-10);

/// Integral over [0, inf) of exp(pos_log_bound(s)), with an exponential-tail
/// remainder past the point where the integrand drops below 1e-12.
double positive_tail_integral(const std::function<double(double)>& pos_log_bound);

/// Markov-inequality transfer F-(t) <= (1/t) * int_0^inf F+(s) ds, clamped to 1.
double negative_tail_transfer(const std::function<double(double)>& pos_log_bound, double t);

}  // namespace comgap
