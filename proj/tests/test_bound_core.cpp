#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "comgap/bound_core.hpp"
#include "comgap/rng.hpp"
#include "oracles.hpp"

using namespace comgap;

TEST_CASE("kappa") {
  const double k = kappa(1e-7);
  CHECK(k >= 1.084640);
  CHECK(k <= 1.084645);

  const auto one = kappa_series(0.9);
  CHECK(one.terms == 1);
  CHECK(one.value == 1.0);

  const auto s = kappa_series(1e-12);
  CHECK(s.error_bound < 1e-12);
  CHECK(std::abs(kappa(1e-12) - oracle::kappa_double_series()) < 1e-10);
  CHECK(std::abs(kappa_log_series(1e-12).value - kappa(1e-12)) < 1e-9);
}

TEST_CASE("theta") {
  CHECK(theta(0.0, 1e-3) == 0.0);
  CHECK_THROWS_AS(theta(-0.1), std::domain_error);
  CHECK_THROWS_AS(theta(1.0), std::domain_error);

  for (double t : {0.1, 0.5, 0.9}) CHECK(theta(t) >= -std::log1p(-t));

  const double k = kappa();
  for (int i = 0; i < 1000; ++i) {
    const double t = 0.999 * i / 999.0;
    const double base = -std::log1p(-t);
    CHECK(theta(t) <= base + k + 1e-9);
    CHECK(theta(t) >= base - 1e-9);
  }

  CHECK(std::abs(theta(0.5, 1e-12) - oracle::theta_partial(0.5)) < 1e-10);
  const auto sv = theta_series(0.99, 1e-12);
  CHECK(sv.error_bound < 1e-12);
}

TEST_CASE("theta is increasing and convex") {
  double prev2 = theta(0.0);
  double prev1 = theta(0.001);
  CHECK(prev1 > prev2);
  for (int i = 2; i < 999; ++i) {
    const double cur = theta(0.001 * i);
    CHECK(cur > prev1);
    CHECK(cur - 2.0 * prev1 + prev2 >= -1e-9);
    prev2 = prev1;
    prev1 = cur;
  }
}

TEST_CASE("phi and vartheta") {
  CHECK(phi(1.0) == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-15));
  CHECK_THROWS_AS(phi(0.0), std::domain_error);
  CHECK_THROWS_AS(vartheta(-1.0), std::domain_error);
  for (double x : {1e-6, 0.3, 1.0, 10.0, 1e6}) {
    CHECK(phi(x) > 0.0);
    CHECK(phi(x) < 1.0);
  }

  for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    CHECK(std::abs(vartheta(x) - oracle::legendre_grid(x)) < 1e-6);
  }
  const double p1 = std::sqrt(2.0) - 1.0;
  CHECK(vartheta(1.0) == doctest::Approx(p1 + std::log(2.0 * p1)).epsilon(1e-14));
  // vartheta(x) - (x - 1 + ln(2/x)) = -1/(2x) + O(x^-2).
  for (double x : {100.0, 1000.0, 1e5}) {
    const double diff = vartheta(x) - (x - 1.0 + std::log(2.0 / x));
    CHECK(std::abs(diff + 0.5 / x) < 2.0 / (x * x));
  }
  CHECK(std::abs(vartheta(1000.0) - (1000.0 - 1.0 + std::log(2.0 / 1000.0))) < 1e-3);
}

TEST_CASE("make_ingredients") {
  CHECK(make_ingredients(1.0, 2.0, false).xi == 1.0);
  CHECK(make_ingredients(0.25, 0.1, false).xi == doctest::Approx(10.0).epsilon(1e-15));
  for (int n : {4, 100, 10000}) {
    const int k = 7;
    const auto ing = make_ingredients(1.0 / n, std::sqrt(static_cast<double>(k) / n), true);
    CHECK(ing.xi == doctest::Approx(2.0 / std::sqrt(7.0)).epsilon(1e-13));
    CHECK(ing.asymmetric);
  }
  CHECK_THROWS_AS(make_ingredients(0.0, 1.0, false), std::domain_error);
  CHECK_THROWS_AS(make_ingredients(1.0, -1.0, false), std::domain_error);
}

TEST_CASE("direct tail bound") {
  const auto ing = make_ingredients(0.01, 0.1, false);
  CHECK(tail_bound_direct(ing, 0.0) == 0.0);
  CHECK_THROWS_AS(tail_bound_direct(ing, -1.0), std::domain_error);

  // Brute-force supremum over a fine lambda grid.
  for (double a : {2.0, 5.0}) {
    double best = 0.0;
    for (int i = 0; i < 200000; ++i) {
      const double lam = ing.xi * (1.0 - 1e-9) * i / 200000.0;
      best = std::max(best, lam * a - theta(lam / ing.xi));
    }
    CHECK(tail_bound_direct(ing, a) == doctest::Approx(-best).epsilon(1e-6));
  }

  Rng rng = rng_stream(11, "direct", 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = make_ingredients(0.01 + uniform01(rng), 0.05 + uniform01(rng), false);
    const double c = 0.1 + 10.0 * uniform01(rng);
    const auto scaled = make_ingredients(g.gap, c * g.lip, false);
    double prev = 0.0;
    for (double a = 0.0; a < 10.0; a += 0.5) {
      const double b = tail_bound_direct(g, a);
      CHECK(b <= 0.0);
      CHECK(b <= prev + 1e-12);
      CHECK(std::abs(b - tail_bound_direct(scaled, c * a)) < 1e-7);
      prev = b;
    }
  }
}

TEST_CASE("closed tail bound") {
  const auto ing = make_ingredients(1.0, 2.0, false);
  CHECK(tail_bound_closed(ing, 0.0) == 0.0);
  CHECK(tail_bound_closed(ing, 0.01) == 0.0);
  CHECK(tail_bound_closed(ing, 1.0) == doctest::Approx(std::min(0.0, kappa(1e-10) - vartheta(1.0))));
  CHECK(tail_bound_closed(ing, 10.0) == doctest::Approx(kappa(1e-10) - vartheta(10.0)));

  // LIS corollary shape: a = t n^{1/4}, xi = 2/sqrt(K).
  const int n = 400;
  const int k = 50;
  const auto lis = make_ingredients(1.0 / n, std::sqrt(static_cast<double>(k) / n), true);
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    const double expect = std::min(0.0, kappa(1e-10) - vartheta(2.0 * t * std::sqrt(std::sqrt(n) / k)));
    CHECK(tail_bound_closed(lis, t * std::pow(n, 0.25)) == doctest::Approx(expect).epsilon(1e-12));
  }

  // Both curves are reported; the closed form may sit below the direct one.
  const auto rep = make_tail_report(make_ingredients(0.01, 0.1, false), {0, 1, 2, 5});
  REQUIRE(rep.levels.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(rep.log_bound_direct[i] <= 0.0);
    CHECK(rep.log_bound_closed[i] <= 0.0);
  }
}

TEST_CASE("negative tail transfer") {
  auto expo = [](double s) { return -s; };
  CHECK(positive_tail_integral(expo) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(negative_tail_transfer(expo, 2.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(negative_tail_transfer(expo, 0.5) == 1.0);

  const double riemann = oracle::riemann(expo, 40.0);
  CHECK(std::abs(positive_tail_integral(expo) - riemann) / riemann < 1e-6);

  auto flat = [](double) { return 0.0; };
  CHECK_THROWS_AS(positive_tail_integral(flat), DivergenceError);

  // LIS family: int F+ <= C n^{1/4}, so F- at c n^{1/4} is bounded by C/c
  // uniformly in n.
  const double u = 2.5;
  std::vector<double> ratio;
  for (int n : {400, 10000, 1000000}) {
    const int k = static_cast<int>(std::lround(u * std::sqrt(n)));
    const auto ing = make_ingredients(1.0 / n, std::sqrt(static_cast<double>(k) / n), true);
    const double integral = positive_tail_integral([&](double s) { return tail_bound_direct(ing, s); });
    ratio.push_back(integral / std::pow(n, 0.25));
  }
  for (double r : ratio) CHECK(r == doctest::Approx(ratio.front()).epsilon(0.05));
}
