#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "comgap/run.hpp"

namespace {

void add_common(CLI::App* sub, comgap::RunConfig& cfg) {
  sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("-o,--output", cfg.output, "output file (default: stdout or $COMGAP_OUTPUT_DIR)");
  sub->add_option("--tol", cfg.tol, "numerical tolerance");
}

void add_ingredients(CLI::App* sub, comgap::RunConfig& cfg) {
  sub->add_option("--gap", cfg.gap, "spectral gap")->required();
  sub->add_option("--lip", cfg.lip, "one-step Lipschitz constant")->required();
  sub->add_flag("--asymmetric", cfg.asymmetric, "lip is the asymmetric constant");
  sub->add_option("--levels", cfg.levels, "levels")->delimiter(',');
}

void add_sampling(CLI::App* sub, comgap::RunConfig& cfg) {
  sub->add_option("--samples", cfg.samples, "Monte Carlo sample count");
  sub->add_option("--seed", cfg.seed, "rng seed")->required();
  sub->add_flag("--same-run-mean", cfg.same_run_mean, "center on the sampled run's own mean");
}

void add_chain_spec(CLI::App* sub, comgap::RunConfig& cfg) {
  sub->add_option("--spec", cfg.spec, "birth-death or uniform");
  sub->add_option("--spec-m", cfg.spec_m, "grid half-width m of {-m eps, ..., m eps}");
  sub->add_option("--eps", cfg.eps, "grid spacing");
  sub->add_option("--n-list", cfg.n_list, "path lengths for the dense gap study")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral-gap concentration bounds and their verification"};
  app.set_version_flag("--version", COMGAP_VERSION);
  app.require_subcommand(1);

  comgap::RunConfig cfg;

  auto* bound = app.add_subcommand("bound-eval", "tail bounds from a gap and a Lipschitz constant");
  add_ingredients(bound, cfg);
  add_common(bound, cfg);

  auto* neg = app.add_subcommand("negative-transfer", "negative-tail bounds via Markov's inequality");
  add_ingredients(neg, cfg);
  add_common(neg, cfg);

  auto* verify = app.add_subcommand("verify", "run the invariant battery");
  verify->add_option("--seed", cfg.seed, "rng seed");
  add_common(verify, cfg);

  auto* lis_gap = app.add_subcommand("lis-gap", "exact gap and Lipschitz checks for the LIS chain");
  lis_gap->add_option("--m", cfg.m, "grid resolution");
  lis_gap->add_option("--n", cfg.n, "sequence length");
  add_common(lis_gap, cfg);

  auto* lis_run = app.add_subcommand("lis-run", "LIS tail bound vs Monte Carlo");
  lis_run->add_option("--m", cfg.m, "grid resolution");
  lis_run->add_option("--n", cfg.n, "sequence length");
  auto* k_opt = lis_run->add_option("--K", cfg.k, "truncation level");
  lis_run->add_option("--u", cfg.u, "K = round(u sqrt(n)) when --K is absent")->excludes(k_opt);
  lis_run->add_option("--levels", cfg.levels, "t levels, a = t n^{1/4}")->delimiter(',');
  add_sampling(lis_run, cfg);
  add_common(lis_run, cfg);

  auto* glauber_gap = app.add_subcommand("glauber-gap", "dense Glauber gap scaling study");
  add_chain_spec(glauber_gap, cfg);
  add_common(glauber_gap, cfg);

  auto* tfa = app.add_subcommand("tfa-run", "TFA tail bound vs Monte Carlo");
  add_chain_spec(tfa, cfg);
  tfa->add_option("--n", cfg.n, "path length (n+1 samples)");
  tfa->add_option("--band-a", cfg.band_a, "lowest frequency in the band");
  tfa->add_option("--band-b", cfg.band_b, "highest frequency in the band");
  tfa->add_option("--lambda1", cfg.lambda1, "override the empirical lambda1");
  tfa->add_option("--levels", cfg.levels, "a levels, level = a/sqrt(n+1)")->delimiter(',');
  add_sampling(tfa, cfg);
  add_common(tfa, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : comgap::kExitConfig;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  const auto outcome = comgap::run(cfg);
  const std::string text = comgap::serialize(outcome.record, cfg.format);
  const std::string path = comgap::resolve_output_path(cfg);
  if (path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(path);
    if (!out) {
      std::fprintf(stderr, "cannot write %s\n", path.c_str());
      return comgap::kExitConfig;
    }
    out << text;
  }
  for (const auto& check : outcome.record.checks) {
    if (!check.passed) std::fprintf(stderr, "FAIL %s: %s\n", check.name.c_str(), check.detail.c_str());
  }
  return outcome.exit_code;
}
