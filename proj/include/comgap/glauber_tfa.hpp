#pragma once

// Paths (x_0, ..., x_n) of a reversible chain (Y, Q, nu) on a finite subset
// of the reals, heat-bath (Glauber) dynamics over those paths, and the
// band-integrated power spectrum ("target frequency analysis") observable
//
//   f_n(x) = 1/(n+1) * sum_{k=a}^{b} |phi_x(k)|^2,
//   phi_x(k) = 1/sqrt(n+1) * sum_t exp(-2 pi i k t / (n+1)) x_t.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "comgap/bound_core.hpp"
#include "comgap/markov_core.hpp"
#include "comgap/sampling.hpp"

namespace comgap::glauber {

struct ChainSpec1D {
  std::vector<double> values;  // Y embedded in R
  DenseKernel q;
  FiniteMeasure nu;

  std::size_t size() const { return values.size(); }
  /// max |y| over Y
  double radius() const;
};

/// Validates nu-reversibility of Q at 1e-12 and a positive spectral gap.
ChainSpec1D make_chain_spec(std::vector<double> values, DenseKernel q, FiniteMeasure nu);

/// {-m eps, ..., m eps}; radius m eps.
std::vector<double> tfa_grid(int m, double eps);

/// Lazy reflecting walk: hold 1/2, move to each neighbor with 1/4, the
/// blocked move at either end is held. nu uniform.
ChainSpec1D birth_death_spec(std::vector<double> values);
/// Q(x, y) = 1/|Y| for all x, y: paths are IID uniform.
ChainSpec1D uniform_spec(std::vector<double> values);
/// Birth-death walk on {-1, -1/2, 0, 1/2, 1}.
ChainSpec1D default_tfa_spec();

using Path = std::vector<int>;  // indices into ChainSpec1D::values

std::vector<double> path_values(const ChainSpec1D& spec, const Path& path);

/// nu(x_0) Q(x_0,x_1) ... Q(x_{n-1},x_n)
double path_weight(const ChainSpec1D& spec, const Path& path);
/// nu(x_n) Q(x_n,x_{n-1}) ... Q(x_1,x_0)
double path_weight_reversed(const ChainSpec1D& spec, const Path& path);
/// nu(x_t) * forward product from t * backward product from t
double path_weight_anchored(const ChainSpec1D& spec, const Path& path, std::size_t t);

/// Exact forward simulation with precomputed cumulative tables.
class PathSampler {
 public:
  explicit PathSampler(const ChainSpec1D& spec);
  Path operator()(int n, Rng& rng) const;

 private:
  std::vector<double> nu_cdf_;
  std::vector<std::vector<double>> row_cdf_;
};

Path sample_path(const ChainSpec1D& spec, int n, Rng& rng);

/// Conditional law of coordinate t given the others: interior
/// ~ Q(x_{t-1},y) Q(y,x_{t+1}); left end ~ nu(y) Q(y,x_1); right end
/// ~ Q(x_{n-1},y). Throws std::domain_error on a zero normalizer.
FiniteMeasure glauber_site_distribution(const ChainSpec1D& spec, const Path& path, std::size_t t);
/// Left-end law written as ~ Q(x_1, y); equal to the t = 0 case under reversibility.
FiniteMeasure glauber_left_site_reversed(const ChainSpec1D& spec, const Path& path);

Path glauber_step(const ChainSpec1D& spec, const Path& path, Rng& rng);
ImplicitKernel<Path> glauber_kernel(const ChainSpec1D& spec);

/// P_n = 1/(n+1) sum_t P_{n,t} restricted to the support of mu_n.
struct DenseGlauber {
  int n = 0;
  std::vector<Path> states;
  DenseKernel kernel;
  FiniteMeasure mu;
};

/// Rows built in parallel; requires |Y|^{n+1} <= cap.
DenseGlauber build_dense_glauber(const ChainSpec1D& spec, int n,
                                 std::size_t cap = kDefaultStateCap);
/// Serial reference for build_dense_glauber.
DenseGlauber build_dense_glauber_serial(const ChainSpec1D& spec, int n,
                                        std::size_t cap = kDefaultStateCap);

struct GapStudy {
  std::vector<int> n;
  std::vector<std::size_t> states;
  std::vector<double> gap;
  std::vector<double> scaled;  // (n+1) * gap
  double lambda1_hat = 0.0;    // min of scaled; an empirical estimate
};

GapStudy gap_scaling_study(const ChainSpec1D& spec, std::span<const int> n_list,
                           std::size_t cap = kDefaultStateCap);

/// Unitary DFT (1/sqrt(N) normalization), FFTW-backed.
std::vector<std::complex<double>> dft(std::span<const double> x);
/// |sum_k |phi(k)|^2 - sum_t x_t^2|
double parseval_residual(std::span<const double> x);

struct TfaBand {
  int a = 1;
  int b = 1;
};

/// Requires 0 < a <= b < (n+1)/2; throws std::invalid_argument otherwise.
void validate_band(const TfaBand& band, int n);

/// Reference evaluation through the full transform.
double tfa_observable(std::span<const double> values, const TfaBand& band);

/// Band-only evaluation with a precomputed twiddle table for fixed n.
class TfaObservable {
 public:
  TfaObservable(int n, TfaBand band);
  double operator()(std::span<const double> values) const;
  int n() const { return n_; }
  const TfaBand& band() const { return band_; }

 private:
  int n_;
  TfaBand band_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

/// 2 R^2 / (n+1)
double tfa_lip_bound(double radius, int n);

/// sum over Glauber moves of prob * (f(x) - f(y))^2, restricted to decreases
/// when asymmetric.
double tfa_delta_state(const ChainSpec1D& spec, const Path& path, const TfaBand& band,
                       bool asymmetric);

/// gap = lambda1_hat/(n+1), lip = 2R^2/(n+1), levels a/sqrt(n+1).
TailReport tfa_corollary_bound(const ChainSpec1D& spec, int n, double lambda1_hat,
                               std::span<const double> a_levels, double tol = 1e-10);

struct TfaExperimentConfig {
  ChainSpec1D spec = default_tfa_spec();
  int n = 255;
  TfaBand band{8, 24};
  std::vector<double> a_levels{1.0, 2.0, 4.0};
  std::vector<int> study_n{2, 3, 4};
  std::optional<double> lambda1;  // overrides the gap study when set
  std::size_t n_samples = 100000;
  std::uint64_t seed = 0;
  Centering centering = Centering::independent_run;
  double tol = 1e-10;
};

struct TfaLevelResult {
  double a = 0.0;
  double level = 0.0;           // a / sqrt(n+1)
  double vartheta_argument = 0.0;  // level * xi == a sqrt(lambda1)/R^2
  TailEstimate tail;
  double log_bound_direct = 0.0;
  double log_bound_closed = 0.0;
  bool dominated = false;
};

struct TfaExperimentResult {
  double lambda1_hat = 0.0;
  std::string lambda1_provenance;
  std::optional<GapStudy> study;
  TailReport report;
  MeanEstimate centering;
  std::vector<TfaLevelResult> levels;

  bool all_dominated() const;
};

TfaExperimentResult tfa_experiment(const TfaExperimentConfig& config);

}  // namespace comgap::glauber
