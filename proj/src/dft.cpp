#include <cmath>
#include <memory>
#include <mutex>

#include <fftw3.h>

#include "comgap/glauber_tfa.hpp"

namespace comgap::glauber {

namespace {

// FFTW planning and plan destruction are not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

std::vector<std::complex<double>> dft(std::span<const double> x) {
  const std::size_t len = x.size();
  if (len == 0) return {};
  const int n = static_cast<int>(len);
  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(len));
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(len / 2 + 1));

  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(n, in.get(), out.get(), FFTW_ESTIMATE);
  }
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(len));
  std::vector<std::complex<double>> coeffs(len);
  for (std::size_t k = 0; k <= len / 2; ++k) {
    coeffs[k] = {out.get()[k][0] * scale, out.get()[k][1] * scale};
  }
  // Real input: phi(N-k) = conj(phi(k)).
  for (std::size_t k = len / 2 + 1; k < len; ++k) coeffs[k] = std::conj(coeffs[len - k]);
  return coeffs;
}

double parseval_residual(std::span<const double> x) {
  double energy = 0.0;
  for (double v : x) energy += v * v;
  double spectral = 0.0;
  for (const auto& c : dft(x)) spectral += std::norm(c);
  return std::abs(spectral - energy);
}

}  // namespace comgap::glauber
