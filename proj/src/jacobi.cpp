#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "comgap/markov_core.hpp"

namespace comgap {

std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n, double tol) {
  if (a.size() != n * n) throw std::invalid_argument("symmetric_eigenvalues: size mismatch");
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    }
    if (std::sqrt(2.0 * off) < tol) break;
    // Skip rotations on entries that are negligible relative to the sweep.
    const double skip = sweep < 3 ? 0.0 : 1e-3 * tol / static_cast<double>(n);

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) <= skip) continue;
        if (apq == 0.0) continue;
        const double h = at(q, q) - at(p, p);
        const double th = h / (2.0 * apq);
        const double t = (th >= 0.0 ? 1.0 : -1.0) / (std::abs(th) + std::sqrt(th * th + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = at(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = at(r, p);
          const double arq = at(r, q);
          const double new_rp = arp - s * (arq + tau * arp);
          const double new_rq = arq + s * (arp - tau * arq);
          at(r, p) = at(p, r) = new_rp;
          at(r, q) = at(q, r) = new_rq;
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

}  // namespace comgap
