// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "comgap/bound_core.hpp"
#include "comgap/glauber_tfa.hpp"
#include "comgap/lis.hpp"
#include "comgap/markov_core.hpp"
#include "../oracles.hpp"

using namespace comgap;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Outcome kappa_bracket() {
  const double k = kappa(1e-7);
  return {k >= 1.084640 && k <= 1.084645, fmt("kappa = %.9f", k)};
}

Outcome theta_sandwich() {
  const double k = kappa();
  double worst = -1.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = 0.999 * i / 999.0;
    const double base = -std::log1p(-t);
    const double th = theta(t);
    worst = std::max({worst, base - th, th - base - k});
  }
  return {worst <= 1e-9, fmt("worst violation %.3g", worst)};
}

Outcome vartheta_legendre() {
  double worst = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = 0.1 * std::pow(500.0, i / 200.0);  // 0.1 .. 50
    worst = std::max(worst, std::abs(vartheta(x) - oracle::legendre_grid(x)));
  }
  return {worst <= 1e-6, fmt("max |vartheta - grid sup| = %.3g", worst)};
}

Outcome replacement_gap() {
  double worst = 0.0;
  bool set_ok = true;
  for (int m = 1; m <= 2; ++m) {
    for (int n = 2; n <= 4; ++n) {
      const auto d = lis::build_dense_replacement(m, n);
      const auto sp = spectrum(d.mu, d.kernel);
      worst = std::max(worst, std::abs(sp.gap - 1.0 / n));
      for (int j = 0; j <= n; ++j) {
        bool found = false;
        for (double ev : sp.eigenvalues) found = found || std::abs(ev - (1.0 - double(j) / n)) <= 1e-9;
        set_ok = set_ok && found;
      }
      for (double ev : sp.eigenvalues) {
        const double j = (1.0 - ev) * n;
        set_ok = set_ok && std::abs(j - std::round(j)) / n <= 1e-9;
      }
    }
  }
  return {worst <= 1e-9 && set_ok,
          fmt("max |gap - 1/n| = %.3g", worst) + (set_ok ? ", spectra match" : ", spectrum mismatch")};
}

Outcome lis_lipschitz() {
  double worst = -1.0;
  for (int m = 1; m <= 2; ++m) {
    for (int n = 1; n <= 4; ++n) {
      const auto ik = lis::replacement_kernel(m, n);
      const auto states = lis::build_dense_replacement(m, n).states;
      for (int k = 1; k <= n; ++k) {
        double top = 0.0;
        for (const auto& s : states) top = std::max(top, lis::delta_state(s, k, ik));
        worst = std::max(worst, std::sqrt(top) - std::sqrt(double(k) / n));
      }
    }
  }
  return {worst <= 1e-12, fmt("max (lip - sqrt(K/n)) = %.3g", worst)};
}

Outcome lis_oracle() {
  Rng rng = rng_stream(2024, "acceptance-lis", 0);
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 50));
    const auto seq = lis::random_grid_sequence(1 + static_cast<int>(uniform_index(rng, 100)), n, rng);
    if (lis::lis_length(seq) != oracle::lis_dp(seq.levels)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches in 10000"};
}

Outcome lis_domination() {
  lis::LisExperimentConfig cfg;
  cfg.n = 400;
  cfg.m = 1000000;
  cfg.u = 2.5;
  cfg.t_levels = {0.5, 1.0, 2.0};
  cfg.n_samples = 100000;
  cfg.seed = 20240601;
  const auto res = lis::lis_experiment(cfg);
  const double kap = kappa(1e-10);
  Outcome out;
  for (const auto& lv : res.levels) {
    const double bound = std::min(0.0, kap - vartheta(2.0 * lv.t * std::sqrt(std::sqrt(400.0) / res.k)));
    const bool ok = lv.tail.estimate - 4.0 * lv.tail.std_error <= std::exp(bound);
    out.pass = out.pass && ok;
    out.detail += fmt("t=%g: ", lv.t) + fmt("%.4g", lv.tail.estimate) + fmt(" <= %.4g; ", std::exp(bound));
  }
  const double mean = res.mean_lis_over_sqrt_n;
  out.pass = out.pass && mean >= 1.6 && mean <= 2.2;
  out.detail += fmt("mean LIS/sqrt(n) = %.4f", mean);
  return out;
}

Outcome glauber_reversible() {
  double worst = 0.0;
  for (const std::vector<double>& values : {std::vector<double>{-1.0, 1.0}, std::vector<double>{-1.0, 0.0, 1.0}}) {
    for (const auto& spec : {glauber::uniform_spec(values), glauber::birth_death_spec(values)}) {
      for (int n = 2; n <= 3; ++n) {
        const auto d = glauber::build_dense_glauber(spec, n);
        worst = std::max({worst, reversibility_residual(d.mu, d.kernel), stationarity_residual(d.mu, d.kernel)});
      }
    }
  }
  return {worst <= 1e-12, fmt("max residual %.3g", worst)};
}

Outcome product_gap() {
  double worst = 0.0;
  for (const std::vector<double>& values : {std::vector<double>{-1.0, 1.0}, std::vector<double>{-1.0, 0.0, 1.0}}) {
    const auto spec = glauber::uniform_spec(values);
    for (int n = 2; n <= 3; ++n) {
      const auto d = glauber::build_dense_glauber(spec, n);
      worst = std::max(worst, std::abs((n + 1) * spectral_gap(d.mu, d.kernel) - 1.0));
    }
  }
  return {worst <= 1e-9, fmt("max |(n+1) gap - 1| = %.3g", worst)};
}

Outcome parseval() {
  Rng rng = rng_stream(2024, "acceptance-parseval", 0);
  double worst = 0.0;
  for (std::size_t size : {16u, 256u, 4096u}) {
    std::vector<double> x(size);
    for (int rep = 0; rep < 100; ++rep) {
      for (auto& v : x) v = 2.0 * uniform01(rng) - 1.0;
      worst = std::max(worst, glauber::parseval_residual(x));
    }
  }
  return {worst < 1e-10, fmt("max residual %.3g", worst)};
}

Outcome tfa_lipschitz() {
  double worst = -1.0;
  const std::vector<double> values{-1.0, 0.0, 1.0};
  for (const auto& spec : {glauber::birth_death_spec(values), glauber::uniform_spec(values)}) {
    for (int n = 2; n <= 3; ++n) {
      const auto d = glauber::build_dense_glauber(spec, n);
      const glauber::TfaBand band{1, 1};
      double top = 0.0;
      for (const auto& p : d.states) top = std::max(top, glauber::tfa_delta_state(spec, p, band, false));
      worst = std::max(worst, std::sqrt(top) - glauber::tfa_lip_bound(spec.radius(), n));
    }
  }
  return {worst <= 1e-12, fmt("max (lip - 2R^2/(n+1)) = %.3g", worst)};
}

Outcome tfa_domination() {
  glauber::TfaExperimentConfig cfg;
  cfg.n = 255;
  cfg.band = {8, 24};
  cfg.a_levels = {1.0, 2.0, 4.0};
  cfg.study_n = {2, 3, 4};
  cfg.n_samples = 100000;
  cfg.seed = 20240601;
  const auto res = glauber::tfa_experiment(cfg);
  const double r2 = cfg.spec.radius() * cfg.spec.radius();
  const double kap = kappa(1e-10);
  Outcome out;
  out.detail = fmt("lambda1_hat = %.4g (empirical); ", res.lambda1_hat);
  for (const auto& lv : res.levels) {
    const double bound = std::min(0.0, kap - vartheta(lv.a * std::sqrt(res.lambda1_hat) / r2));
    const bool ok = lv.tail.estimate - 4.0 * lv.tail.std_error <= std::exp(bound);
    out.pass = out.pass && ok;
    out.detail += fmt("a=%g: ", lv.a) + fmt("%.4g", lv.tail.estimate) + fmt(" <= %.4g; ", std::exp(bound));
  }
  return out;
}

Outcome asym_lip_battery() {
  Rng rng = rng_stream(2024, "acceptance-prop", 0);
  double worst = -1.0;
  bool constancy = true;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 7);
    const auto c = random_reversible_chain(n, rng);
    std::vector<double> f(n), g(n), fg(n), cf(n);
    const double s = 5.0 * uniform01(rng);
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = 2.0 * uniform01(rng) - 1.0;
      g[i] = 2.0 * uniform01(rng) - 1.0;
      fg[i] = f[i] + g[i];
      cf[i] = s * f[i];
    }
    const double lf = lip_constant(c.kernel, f, true).value;
    const double lg = lip_constant(c.kernel, g, true).value;
    worst = std::max(worst, lip_constant(c.kernel, fg, true).value - lf - lg);
    worst = std::max(worst, std::abs(lip_constant(c.kernel, cf, true).value - s * lf));
    constancy = constancy && lf > 0.0;
    const std::vector<double> cst(n, f[0]);
    constancy = constancy && lip_constant(c.kernel, cst, true).value == 0.0;
    for (int t = 1; t <= 3; ++t) {
      worst = std::max(worst, t_step_asym_deviation(c.mu, c.kernel, f, t) - t * lf);
    }
  }
  return {worst <= 1e-10 && constancy,
          fmt("worst violation %.3g", worst) + (constancy ? ", constancy detected" : ", constancy FAILED")};
}

Outcome fluctuation_identity() {
  Rng rng = rng_stream(2024, "acceptance-fluct", 0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 30);
    std::vector<double> w(n), f(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.01 + uniform01(rng);
      f[i] = std::floor(8.0 * uniform01(rng)) / 4.0;  // ties on purpose
    }
    const auto fl = fluctuation_integrals(FiniteMeasure::from_unnormalized(w), f);
    worst = std::max(worst, std::abs(fl.plus - fl.minus));
  }
  auto expo = [](double s) { return -s; };
  const double quad = positive_tail_integral(expo);
  const double riemann = oracle::riemann(expo, 40.0);
  const double rel = std::abs(quad - riemann) / riemann;
  bool capped = true;
  const auto ing = make_ingredients(0.01, 0.1, false);
  auto direct = [&](double s) { return tail_bound_direct(ing, s); };
  for (double t : {0.01, 0.5, 1.0, 5.0, 50.0}) {
    capped = capped && negative_tail_transfer(expo, t) <= 1.0 && negative_tail_transfer(direct, t) <= 1.0;
  }
  return {worst <= 1e-12 && rel <= 1e-6 && capped,
          fmt("max |int F+ - int F-| = %.3g", worst) + fmt(", quadrature rel err %.3g", rel)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 kappa bracket", kappa_bracket},
      {"2 theta sandwich", theta_sandwich},
      {"3 vartheta Legendre identity", vartheta_legendre},
      {"4 replacement-chain gap and spectrum", replacement_gap},
      {"5 LIS Lipschitz bound", lis_lipschitz},
      {"6 LIS oracle equivalence", lis_oracle},
      {"7 LIS corollary domination", lis_domination},
      {"8 Glauber reversibility and invariance", glauber_reversible},
      {"9 product-chain gap", product_gap},
      {"10 Parseval", parseval},
      {"11 TFA Lipschitz bound", tfa_lipschitz},
      {"12 TFA corollary domination (conditional on empirical lambda1)", tfa_domination},
      {"13 asymmetric Lipschitz battery", asym_lip_battery},
      {"14 fluctuation-integral identity", fluctuation_identity},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %-62s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
