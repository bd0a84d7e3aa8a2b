#pragma once

// Finite-state measures and transition kernels, with the quantities that feed
// BoundIngredients: Dirichlet forms, spectral gaps and one-step Lipschitz
// constants. Observables on an indexed state space are tabulated as one value
// per state id.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "comgap/rng.hpp"

namespace comgap {

inline constexpr std::size_t kDefaultStateCap = 20000;

class FiniteMeasure {
 public:
  FiniteMeasure() = default;
  /// Throws std::invalid_argument unless weights are >= 0 and sum to 1 (1e-12).
  explicit FiniteMeasure(std::vector<double> weights);

  static FiniteMeasure uniform(std::size_t n);
  /// Normalizes nonnegative weights with a positive total.
  static FiniteMeasure from_unnormalized(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }
  bool nondegenerate() const;
  double expectation(std::span<const double> f) const;

 private:
  std::vector<double> weights_;
};

/// Row-major, row-stochastic square matrix.
class DenseKernel {
 public:
  DenseKernel() = default;
  /// Throws std::invalid_argument on negative entries or rows not summing to 1.
  DenseKernel(std::size_t n, std::vector<double> entries);

  std::size_t size() const { return n_; }
  double operator()(std::size_t x, std::size_t y) const { return entries_[x * n_ + y]; }
  std::span<const double> row(std::size_t x) const {
    return std::span<const double>(entries_).subspan(x * n_, n_);
  }
  std::span<const double> entries() const { return entries_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

template <class State>
struct Transition {
  State to;
  double prob = 0.0;
};

/// A chain too large to materialize: a one-step sampler plus an exact
/// enumeration of the one-step law from a given state.
template <class State>
struct ImplicitKernel {
  std::function<State(const State&, Rng&)> step;
  std::function<std::vector<Transition<State>>(const State&)> neighbors;
  std::string description;
};

double stationarity_residual(const FiniteMeasure& mu, const DenseKernel& p);
bool check_stationary(const FiniteMeasure& mu, const DenseKernel& p, double tol);

double reversibility_residual(const FiniteMeasure& mu, const DenseKernel& p);
bool check_reversible(const FiniteMeasure& mu, const DenseKernel& p, double tol);

/// (1/2) sum_{x,y} (f(x)-f(y)) (g(x)-g(y)) mu(x) P(x,y)
double dirichlet_form(const FiniteMeasure& mu, const DenseKernel& p, std::span<const double> f,
                      std::span<const double> g);
/// sum_x f(x) ((I-P) g)(x) mu(x); equals dirichlet_form under reversibility.
double dirichlet_form_generator(const FiniteMeasure& mu, const DenseKernel& p,
                                std::span<const double> f, std::span<const double> g);

double variance(const FiniteMeasure& mu, std::span<const double> f);

/// Eigenvalues of a symmetric matrix (row-major, n x n), descending. Cyclic
/// Jacobi rotations until the off-diagonal Frobenius norm is below tol.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n,
                                          double tol = 1e-12);

struct Spectrum {
  std::vector<double> eigenvalues;  // descending; eigenvalues[0] == 1
  double gap = 0.0;                 // 1 - eigenvalues[1]
  double most_negative = 0.0;       // diagnostic only; not part of the gap
};

/// Spectrum of D^{1/2} P D^{-1/2}. Requires reversibility at 1e-10 and a
/// non-degenerate measure on at least two states.
Spectrum spectrum(const FiniteMeasure& mu, const DenseKernel& p);
double spectral_gap(const FiniteMeasure& mu, const DenseKernel& p);

struct LipResult {
  double value = 0.0;
  bool exact = true;  // false: max over a sampled subset, i.e. a lower bound
  std::size_t argmax = 0;
};

/// sum_y P(x,y) (f(x)-f(y))^2 [f(x) > f(y) if asymmetric]
double one_step_deviation_sq(const DenseKernel& p, std::span<const double> f, std::size_t x,
                             bool asymmetric);

/// Exact max over all states, OpenMP-parallel over rows.
LipResult lip_constant(const DenseKernel& p, std::span<const double> f, bool asymmetric);
/// Serial reference for lip_constant.
LipResult lip_constant_serial(const DenseKernel& p, std::span<const double> f, bool asymmetric);

/// Max over the supplied states only; the result is a certified lower bound.
template <class State, class Obs>
LipResult lip_constant_sampled(const ImplicitKernel<State>& kernel, const Obs& f,
                               std::span<const State> states, bool asymmetric);

/// sqrt(E[(f(X0)-f(Xt))^2 1{f(X0) > f(Xt)}]) under the stationary joint law.
double t_step_asym_deviation(const FiniteMeasure& mu, const DenseKernel& p,
                             std::span<const double> f, int t,
                             std::size_t cap = kDefaultStateCap);

struct Fluctuations {
  double plus = 0.0;
  double minus = 0.0;
};

/// mu{f - E f >= a} and mu{-(f - E f) >= a}; ties belong to the event.
Fluctuations exact_fluctuations(const FiniteMeasure& mu, std::span<const double> f, double a);

/// int_0^inf F+ and int_0^inf F-, integrated piece by piece between the
/// breakpoints of the step functions.
Fluctuations fluctuation_integrals(const FiniteMeasure& mu, std::span<const double> f);

struct ReversibleChain {
  FiniteMeasure mu;
  DenseKernel kernel;
};

/// P = W / rowsum(W) for a random symmetric W > 0, reversible for mu ~ rowsum(W).
/// Every entry is positive, so the chain is irreducible.
ReversibleChain random_reversible_chain(std::size_t n, Rng& rng);

// ---------------------------------------------------------------------------

template <class State, class Obs>
LipResult lip_constant_sampled(const ImplicitKernel<State>& kernel, const Obs& f,
                               std::span<const State> states, bool asymmetric) {
  if (states.empty()) throw std::invalid_argument("lip_constant_sampled: empty state list");
  LipResult out;
  out.exact = false;
  double best = -1.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double fx = f(states[i]);
    double acc = 0.0;
    for (const auto& tr : kernel.neighbors(states[i])) {
      const double d = fx - f(tr.to);
      if (asymmetric && !(d > 0.0)) continue;
      acc += tr.prob * d * d;
    }
    if (acc > best) {
      best = acc;
      out.argmax = i;
    }
  }
  out.value = std::sqrt(best);
  return out;
}

}  // namespace comgap
