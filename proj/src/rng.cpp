#include "comgap/rng.hpp"

#include <algorithm>

namespace comgap {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t label_hash(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng rng_stream(std::uint64_t seed, std::string_view label, std::uint64_t replica) {
  const std::uint64_t k0 = splitmix64(seed);
  const std::uint64_t k1 = splitmix64(k0 ^ label_hash(label));
  const std::uint64_t k2 = splitmix64(k1 ^ splitmix64(replica + 0x632be59bd9b4e019ULL));
  const std::uint64_t k3 = splitmix64(k2);
  std::seed_seq seq{static_cast<std::uint32_t>(k2), static_cast<std::uint32_t>(k2 >> 32),
                    static_cast<std::uint32_t>(k3), static_cast<std::uint32_t>(k3 >> 32)};
  return Rng(seq);
}

std::size_t sample_cdf(std::span<const double> cdf, Rng& rng) {
  const double u = uniform01(rng) * cdf.back();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const auto idx = static_cast<std::size_t>(it - cdf.begin());
  return std::min(idx, cdf.size() - 1);
}

}  // namespace comgap
