#include "comgap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "comgap/bound_core.hpp"
#include "comgap/glauber_tfa.hpp"
#include "comgap/lis.hpp"
#include "comgap/markov_core.hpp"
#include "comgap/run.hpp"
#include "comgap/sampling.hpp"

namespace comgap {

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

/// Tracks the worst violation of a "lhs <= rhs" family of comparisons.
struct Worst {
  double excess = -std::numeric_limits<double>::infinity();
  void le(double lhs, double rhs) { excess = std::max(excess, lhs - rhs); }
  void near(double lhs, double rhs) { excess = std::max(excess, std::abs(lhs - rhs)); }
  CheckResult as_le(const std::string& name, double tol) const {
    return {name, excess <= tol, "worst excess " + num(excess)};
  }
  CheckResult as_near(const std::string& name, double tol) const {
    return {name, excess <= tol, "worst deviation " + num(excess)};
  }
};

double legendre_grid(double x) {
  // sup over [0,1) of lambda x + ln(1 - lambda^2): coarse grid, then two
  // finer grids around the best point.
  auto obj = [x](double l) { return l * x + std::log1p(-l * l); };
  double best_l = 0.0;
  double best = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  double step = 1e-4;
  for (int pass = 0; pass < 3; ++pass) {
    for (double l = lo; l < hi; l += step) {
      const double v = obj(l);
      if (v > best) {
        best = v;
        best_l = l;
      }
    }
    lo = std::max(0.0, best_l - step);
    hi = std::min(1.0 - 1e-15, best_l + step);
    step /= 100.0;
  }
  return best;
}

std::vector<double> random_observable(std::size_t n, Rng& rng) {
  std::vector<double> f(n);
  for (auto& v : f) v = 2.0 * uniform01(rng) - 1.0;
  return f;
}

std::size_t lis_dp(const std::vector<int>& x) {
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

}  // namespace

std::vector<CheckResult> verify_bound_core() {
  std::vector<CheckResult> out;
  const double k = kappa(1e-12);

  out.push_back({"kappa bracket", k >= 1.084640 && k <= 1.084645, num(k)});
  Worst routes;
  routes.near(kappa_log_series(1e-12).value, k);
  double dbl = 0.0;
  for (int n = 1; n < 60; ++n) {
    double inner = 0.0;
    for (int m = 1; m < 60; ++m) inner += std::pow(4.0, -static_cast<double>(m) * n) / m;
    dbl += std::ldexp(inner, n);
  }
  routes.near(dbl, k);
  out.push_back(routes.as_near("kappa routes agree", 1e-9));

  out.push_back({"theta(0) == 0", theta(0.0) == 0.0, num(theta(0.0))});
  Worst sandwich;
  Worst convex;
  bool increasing = true;
  std::vector<double> th(1000);
  for (int i = 0; i < 1000; ++i) {
    const double t = 0.999 * i / 999.0;
    th[i] = theta(t);
    const double base = -std::log1p(-t);
    sandwich.le(base, th[i]);
    sandwich.le(th[i], base + k);
    if (i > 0) increasing = increasing && th[i] > th[i - 1];
    if (i > 1) convex.le(0.0, th[i] - 2.0 * th[i - 1] + th[i - 2]);
  }
  out.push_back(sandwich.as_le("theta sandwich", 1e-9));
  out.push_back({"theta increasing", increasing, ""});
  out.push_back(convex.as_le("theta convex", 1e-9));

  Worst legendre;
  for (double x = 0.1; x <= 50.0 + 1e-12; x *= 1.25) legendre.near(vartheta(x), legendre_grid(x));
  legendre.near(vartheta(50.0), legendre_grid(50.0));
  out.push_back(legendre.as_near("vartheta is the Legendre transform", 1e-6));

  Worst homog;
  Worst mono;
  Rng rng = rng_stream(7, "bound_core", 0);
  for (int trial = 0; trial < 20; ++trial) {
    const double gap = 0.01 + uniform01(rng);
    const double lip = 0.05 + uniform01(rng);
    const double c = 0.2 + 5.0 * uniform01(rng);
    const auto ing = make_ingredients(gap, lip, false);
    const auto scaled = make_ingredients(gap, c * lip, false);
    double prev = 0.0;
    for (double a : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double b = tail_bound_direct(ing, a);
      homog.near(b, tail_bound_direct(scaled, c * a));
      mono.le(b, prev + 1e-12);
      mono.le(tail_bound_closed(ing, a), 0.0);
      prev = b;
    }
  }
  out.push_back(homog.as_near("direct bound homogeneous", 1e-7));
  out.push_back(mono.as_le("log-bounds <= 0 and nonincreasing", 0.0));
  return out;
}

std::vector<CheckResult> verify_markov_core(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng = rng_stream(seed, "markov_core", 0);
  Worst stat;
  Worst dir;
  Worst rayleigh;
  Worst subadd;
  Worst homog;
  Worst tstep;
  Worst integral;
  bool constancy = true;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 7);
    const auto chain = random_reversible_chain(n, rng);
    const auto& mu = chain.mu;
    const auto& p = chain.kernel;
    const double rev = reversibility_residual(mu, p);
    stat.le(stationarity_residual(mu, p), n * std::max(rev, 1e-16));

    const auto f = random_observable(n, rng);
    const auto g = random_observable(n, rng);
    dir.near(dirichlet_form(mu, p, f, g), dirichlet_form_generator(mu, p, f, g));
    const double gap = spectral_gap(mu, p);
    rayleigh.le(gap * variance(mu, f), dirichlet_form(mu, p, f, f) + 1e-12);

    std::vector<double> fg(n);
    for (std::size_t i = 0; i < n; ++i) fg[i] = f[i] + g[i];
    const double lf = lip_constant(p, f, true).value;
    subadd.le(lip_constant(p, fg, true).value, lf + lip_constant(p, g, true).value + 1e-10);
    const double c = 3.0 * uniform01(rng);
    std::vector<double> cf(n);
    for (std::size_t i = 0; i < n; ++i) cf[i] = c * f[i];
    homog.near(lip_constant(p, cf, true).value, c * lf);
    constancy = constancy && lf > 0.0;
    for (int t = 1; t <= 3; ++t) tstep.le(t_step_asym_deviation(mu, p, f, t), t * lf + 1e-10);

    const auto fl = fluctuation_integrals(mu, f);
    integral.near(fl.plus, fl.minus);
  }
  out.push_back(stat.as_le("reversible implies stationary", 0.0));
  out.push_back(dir.as_near("Dirichlet form routes agree", 1e-12));
  out.push_back(rayleigh.as_le("gap * Var <= Dirichlet form", 0.0));
  out.push_back(subadd.as_le("asymmetric lip subadditive", 0.0));
  out.push_back(homog.as_near("asymmetric lip homogeneous", 1e-10));
  out.push_back({"nonconstant f has positive asymmetric lip", constancy, ""});
  out.push_back(tstep.as_le("t-step deviation <= t * lip", 0.0));
  out.push_back(integral.as_near("int F+ == int F-", 1e-12));

  // Empirical tails vs exact fluctuations on a 6-state measure.
  const auto mu = FiniteMeasure::from_unnormalized({1, 2, 3, 1, 2, 1});
  const std::vector<double> f{0.0, 1.0, 0.5, 3.0, 2.0, -1.0};
  std::vector<double> cdf(mu.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) cdf[i] = (acc += mu[i]);
  auto sampler = [&](Rng& r) { return sample_cdf(cdf, r); };
  auto obs = [&](std::size_t x) { return f[x]; };
  const std::vector<double> levels{0.25, 0.75, 1.5};
  const auto est = empirical_tails(sampler, obs, levels, 100000, seed);
  bool covered = true;
  std::string detail;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double exact = exact_fluctuations(mu, f, levels[i]).plus;
    covered = covered && std::abs(est[i].estimate - exact) <= 4.0 * est[i].std_error + 1e-12;
    detail += num(est[i].estimate) + " vs " + num(exact) + "; ";
  }
  out.push_back({"empirical tail covers exact at 4 sigma", covered, detail});
  return out;
}

std::vector<CheckResult> verify_lis(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng = rng_stream(seed, "lis", 0);
  bool dp_ok = true;
  for (int trial = 0; trial < 2000 && dp_ok; ++trial) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 50));
    const int m = 1 + static_cast<int>(uniform_index(rng, 60));
    const auto seq = lis::random_grid_sequence(m, n, rng);
    dp_ok = lis::lis_length(seq) == lis_dp(seq.levels);
  }
  out.push_back({"patience sorting == DP", dp_ok, ""});

  bool one_step = true;
  Worst lip;
  Worst gap;
  bool spectrum_set = true;
  for (int m = 1; m <= 2; ++m) {
    for (int n = 2; n <= 4; ++n) {
      const auto dense = lis::build_dense_replacement(m, n);
      for (const auto& x : dense.states) {
        const auto base = lis::lis_length(x);
        for (int i = 0; i < n; ++i) {
          auto y = x;
          for (int v = 0; v <= m; ++v) {
            y.levels[i] = v;
            const auto l = lis::lis_length(y);
            one_step = one_step && (l + 1 >= base) && (l <= base + 1);
          }
        }
      }
      for (int k = 1; k <= n; ++k) {
        std::vector<double> f(dense.states.size());
        for (std::size_t s = 0; s < f.size(); ++s) {
          f[s] = static_cast<double>(lis::truncated_lis(dense.states[s], k));
        }
        lip.le(lip_constant(dense.kernel, f, true).value, std::sqrt(static_cast<double>(k) / n));
      }
      const auto sp = spectrum(dense.mu, dense.kernel);
      gap.near(sp.gap, 1.0 / n);
      for (double ev : sp.eigenvalues) {
        const double j = (1.0 - ev) * n;
        spectrum_set = spectrum_set && std::abs(j - std::round(j)) <= 1e-8;
      }
    }
  }
  out.push_back({"single replacement changes LIS by <= 1", one_step, ""});
  out.push_back(lip.as_le("truncated LIS asymmetric lip <= sqrt(K/n)", 1e-12));
  out.push_back(gap.as_near("replacement gap == 1/n", 1e-9));
  out.push_back({"replacement spectrum in {1 - j/n}", spectrum_set, ""});

  lis::LisExperimentConfig cfg;
  cfg.n = 1000000;
  cfg.u = 2.5;
  bool limit = true;
  for (double t : {0.5, 1.0, 2.0}) {
    const auto rep = [&] {
      auto c = cfg;
      c.t_levels = {t};
      return lis::lis_corollary_bound(c);
    }();
    limit = limit && std::abs(rep.log_bound_closed[0] - lis::lis_limit_log_bound(t, 2.5)) <= 1e-3;
  }
  out.push_back({"LIS corollary approaches its limit", limit, ""});
  return out;
}

std::vector<CheckResult> verify_glauber_tfa(std::uint64_t seed) {
  using namespace glauber;
  std::vector<CheckResult> out;
  Rng rng = rng_stream(seed, "glauber_tfa", 0);

  Worst factor;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + uniform_index(rng, 3);
    const auto chain = random_reversible_chain(k, rng);
    std::vector<double> values(k);
    for (std::size_t i = 0; i < k; ++i) values[i] = static_cast<double>(i);
    const auto spec = make_chain_spec(values, chain.kernel, chain.mu);
    const int n = 1 + static_cast<int>(uniform_index(rng, 6));
    const auto path = sample_path(spec, n, rng);
    const double w = path_weight(spec, path);
    factor.near(path_weight_reversed(spec, path), w);
    for (std::size_t t = 0; t < path.size(); ++t) factor.near(path_weight_anchored(spec, path, t), w);
  }
  out.push_back(factor.as_near("path weight factorizations agree", 1e-14));

  Worst rev;
  Worst lip;
  for (const std::vector<double>& values :
       {std::vector<double>{-0.5, 0.5}, std::vector<double>{-1.0, 0.0, 1.0}}) {
    for (const auto& spec : {uniform_spec(values), birth_death_spec(values)}) {
      for (int n = 2; n <= 3; ++n) {
        const auto dense = build_dense_glauber(spec, n);
        rev.le(reversibility_residual(dense.mu, dense.kernel), 0.0);
        rev.le(stationarity_residual(dense.mu, dense.kernel), 0.0);
        if (values.size() == 3) {
          const TfaObservable obs(n, {1, 1});
          std::vector<double> f(dense.states.size());
          for (std::size_t s = 0; s < f.size(); ++s) f[s] = obs(path_values(spec, dense.states[s]));
          lip.le(lip_constant(dense.kernel, f, false).value, tfa_lip_bound(spec.radius(), n));
        }
      }
    }
  }
  out.push_back(rev.as_le("dense Glauber reversible and stationary", 1e-12));
  out.push_back(lip.as_le("TFA lip <= 2R^2/(n+1)", 1e-12));

  Worst parseval;
  for (std::size_t size : {16u, 256u, 4096u}) {
    std::vector<double> x(size);
    for (int rep = 0; rep < 10; ++rep) {
      for (auto& v : x) v = 2.0 * uniform01(rng) - 1.0;
      parseval.le(parseval_residual(x), 0.0);
    }
  }
  out.push_back(parseval.as_le("Parseval identity", 1e-10));

  // Exact sampler: path frequencies against weights on a two-state chain.
  const auto spec2 = make_chain_spec({0.0, 1.0}, DenseKernel(2, {0.7, 0.3, 0.3, 0.7}),
                                     FiniteMeasure::uniform(2));
  const PathSampler sampler(spec2);
  const std::size_t draws = 100000;
  const auto codes = draw_samples(
      [&](Rng& r) {
        const auto p = sampler(2, r);
        return static_cast<double>(p[0] * 4 + p[1] * 2 + p[2]);
      },
      draws, seed, "paths");
  std::vector<double> counts(8, 0.0);
  for (double c : codes) counts[static_cast<std::size_t>(c)] += 1.0;
  bool freq = true;
  for (int code = 0; code < 8; ++code) {
    const double w = path_weight(spec2, {code >> 2, (code >> 1) & 1, code & 1});
    const double sd = std::sqrt(draws * w * (1.0 - w));
    freq = freq && std::abs(counts[code] - draws * w) <= 4.0 * sd;
  }
  out.push_back({"path sampler matches path weights at 4 sigma", freq, ""});

  const auto spec = default_tfa_spec();
  const std::vector<double> a_levels{1.0, 2.0, 4.0};
  const double lambda1 = 0.0261;
  const auto rep = tfa_corollary_bound(spec, 255, lambda1, a_levels);
  Worst arg;
  for (std::size_t i = 0; i < a_levels.size(); ++i) {
    const double r2 = spec.radius() * spec.radius();
    arg.near(rep.levels[i] * rep.ingredients.xi, a_levels[i] * std::sqrt(lambda1) / r2);
  }
  out.push_back(arg.as_near("TFA vartheta argument == a sqrt(lambda1)/R^2", 1e-12));
  return out;
}

std::vector<CheckResult> verify_harness(std::uint64_t seed) {
  std::vector<CheckResult> out;
  RunConfig cfg;
  cfg.command = "bound-eval";
  cfg.gap = 0.01;
  cfg.lip = 0.1;
  cfg.levels = {0, 1, 2, 5};
  const auto a = run(cfg);
  const auto j = to_json(a.record);
  out.push_back({"JSON round trip", record_from_json(j) == a.record, ""});

  std::istringstream csv(to_csv(a.record));
  std::string line;
  std::getline(csv, line);
  bool same = true;
  for (const auto& row : a.record.rows) {
    std::getline(csv, line);
    std::istringstream cells(line);
    std::string cell;
    for (double v : row) {
      std::getline(cells, cell, ',');
      same = same && std::strtod(cell.c_str(), nullptr) == v;
    }
  }
  out.push_back({"CSV and JSON numbers agree", same, ""});

  // 10^6 uniforms across 100 replica streams, chi-square on 100 bins.
  const auto u = draw_samples([](Rng& r) { return uniform01(r); }, 1000000, seed, "equidist");
  std::vector<double> bins(100, 0.0);
  for (double v : u) bins[std::min<std::size_t>(99, static_cast<std::size_t>(v * 100))] += 1.0;
  double chi2 = 0.0;
  for (double b : bins) chi2 += (b - 10000.0) * (b - 10000.0) / 10000.0;
  // 99 degrees of freedom: mean 99, sd sqrt(198).
  out.push_back({"rng equidistribution", std::abs(chi2 - 99.0) <= 4.0 * std::sqrt(198.0),
                 "chi2 " + num(chi2)});

  Rng s1 = rng_stream(0, "mean", 0);
  Rng s2 = rng_stream(0, "tail", 0);
  out.push_back({"label separation", s1() != s2(), ""});
  return out;
}

std::vector<CheckResult> run_invariant_battery(std::uint64_t seed) {
  std::vector<CheckResult> all;
  auto append = [&all](std::vector<CheckResult> v) {
    all.insert(all.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  };
  append(verify_bound_core());
  append(verify_markov_core(seed));
  append(verify_lis(seed));
  append(verify_glauber_tfa(seed));
  append(verify_harness(seed));
  return all;
}

}  // namespace comgap
