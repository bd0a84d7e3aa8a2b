#include "comgap/bound_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

namespace comgap {

namespace {

constexpr double kLambdaMarginRel = 1e-9;
constexpr double kIntegrandFloor = 1e-12;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

SeriesValue kappa_series(double tol) {
  require_positive(tol, "tol");
  SeriesValue out;
  double pow4 = 1.0;
  for (std::size_t m = 1;; ++m) {
    pow4 *= 4.0;
    out.value += 2.0 / (static_cast<double>(m) * (pow4 - 2.0));
    out.terms = m;
    // For j >= 2: 4^j - 2 >= (7/8) 4^j, so the tail past m is at most
    // 2/(m+1) * (8/7) * (4/3) * 4^-(m+1).
    const double next = 2.0 / (static_cast<double>(m + 1) * (4.0 * pow4 - 2.0));
    const double tail = 2.0 / static_cast<double>(m + 1) * (8.0 / 7.0) * (4.0 / 3.0) / (4.0 * pow4);
    if (next < tol && tail < tol) {
      out.error_bound = tail;
      return out;
    }
  }
}

double kappa(double tol) { return kappa_series(tol).value; }

SeriesValue kappa_log_series(double tol) {
  require_positive(tol, "tol");
  SeriesValue out;
  double pow2 = 1.0;
  double pow4 = 1.0;
  for (std::size_t n = 1;; ++n) {
    pow2 *= 2.0;
    pow4 *= 4.0;
    out.value += -pow2 * std::log1p(-1.0 / pow4);
    out.terms = n;
    // 2^j ln(1/(1-4^-j)) <= 2^-j / (1 - 4^-j): the tail past n is <= (4/3) 2^-n.
    const double tail = (4.0 / 3.0) / pow2;
    if (tail < tol) {
      out.error_bound = tail;
      return out;
    }
  }
}

SeriesValue theta_series(double t, double tol) {
  if (!(t >= 0.0) || !(t < 1.0)) {
    throw std::domain_error("theta: t must lie in [0, 1)");
  }
  require_positive(tol, "tol");
  SeriesValue out;
  out.value = -std::log1p(-t);
  out.terms = 1;
  if (t == 0.0) return out;
  double pow2 = 1.0;
  double inv4 = 1.0;
  for (std::size_t n = 1;; ++n) {
    pow2 *= 2.0;
    inv4 *= 0.25;
    out.value += -pow2 * std::log1p(-t * inv4);
    out.terms = n + 1;
    // Terms j > n are each <= t 2^-j / (1 - t 4^-(n+1)).
    const double tail = t * (1.0 / pow2) / (1.0 - t * inv4 * 0.25);
    if (tail < tol) {
      out.error_bound = tail;
      return out;
    }
  }
}

double theta(double t, double tol) { return theta_series(t, tol).value; }

double phi(double x) {
  if (!(x > 0.0)) throw std::domain_error("phi: x must be positive");
  // sqrt(1 + 1/x^2) - 1/x rewritten without cancellation.
  return x / (std::sqrt(x * x + 1.0) + 1.0);
}

double vartheta(double x) {
  if (!(x > 0.0)) throw std::domain_error("vartheta: x must be positive");
  const double p = phi(x);
  // (2/x) phi(x) = 2 / (sqrt(x^2+1) + 1)
  return x * p + std::log(2.0 / (std::sqrt(x * x + 1.0) + 1.0));
}

BoundIngredients make_ingredients(double gap, double lip, bool asymmetric) {
  require_positive(gap, "gap");
  require_positive(lip, "lip");
  BoundIngredients ing;
  ing.gap = gap;
  ing.lip = lip;
  ing.xi = 2.0 * std::sqrt(gap) / lip;
  ing.asymmetric = asymmetric;
  return ing;
}

double tail_bound_direct(const BoundIngredients& ing, double a, double tol) {
  if (!(a >= 0.0)) throw std::domain_error("tail_bound_direct: a must be >= 0");
  require_positive(ing.xi, "xi");
  if (a == 0.0) return 0.0;
  const double xi = ing.xi;
  const double hi = xi * (1.0 - kLambdaMarginRel);
  const double theta_tol = std::max(1e-15, tol * 1e-3);
  auto neg_objective = [&](double lambda) {
    return -(lambda * a - theta(lambda / xi, theta_tol));
  };
  const int bits = std::clamp(static_cast<int>(-std::log2(tol)), 8,
                              std::numeric_limits<double>::digits / 2);
  const auto [arg, val] = boost::math::tools::brent_find_minima(neg_objective, 0.0, hi, bits);
  (void)arg;
  // The objective at lambda = 0 is 0, so the supremum is never negative.
  const double sup = std::max(0.0, -val);
  return std::min(0.0, -sup);
}

double tail_bound_closed(const BoundIngredients& ing, double a) {
  if (!(a >= 0.0)) throw std::domain_error("tail_bound_closed: a must be >= 0");
  if (a == 0.0) return 0.0;
  const double x = a * ing.xi;
  if (!(x > 0.0)) return 0.0;
  return std::min(0.0, kappa(1e-10) - vartheta(x));
}

TailReport make_tail_report(const BoundIngredients& ing, std::vector<double> levels, double tol) {
  TailReport report;
  report.ingredients = ing;
  report.levels = std::move(levels);
  report.log_bound_direct.reserve(report.levels.size());
  report.log_bound_closed.reserve(report.levels.size());
  for (double a : report.levels) {
    report.log_bound_direct.push_back(tail_bound_direct(ing, a, tol));
    report.log_bound_closed.push_back(tail_bound_closed(ing, a));
  }
  return report;
}

double positive_tail_integral(const std::function<double(double)>& pos_log_bound) {
  const double floor_log = std::log(kIntegrandFloor);
  double upper = 1.0;
  while (pos_log_bound(upper) >= floor_log) {
    upper *= 2.0;
    if (upper > 1e18) {
      throw DivergenceError("positive tail bound does not decay; integral diverges");
    }
  }
  auto integrand = [&](double s) { return std::exp(std::min(0.0, pos_log_bound(s))); };
  double err = 0.0;
  const double body = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, upper, 20, 1e-13, &err);

  // Past `upper` the log-bound is treated as linear with the local slope.
  const double h = upper * 1e-3;
  const double slope = (pos_log_bound(upper) - pos_log_bound(upper + h)) / h;
  if (!(slope > 0.0)) {
    throw DivergenceError("positive tail bound is not decreasing at the truncation point");
  }
  return body + std::exp(pos_log_bound(upper)) / slope;
}

double negative_tail_transfer(const std::function<double(double)>& pos_log_bound, double t) {
  require_positive(t, "t");
  return std::min(1.0, positive_tail_integral(pos_log_bound) / t);
}

}  // namespace comgap
