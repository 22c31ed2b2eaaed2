#include "ccr/rng.hpp"

#include <cmath>

#include "ccr/types.hpp"

namespace ccr {

double uniform01(Rng& rng) {
  // 53 random bits -> double in [0,1), the usual ldexp construction.
  return std::ldexp(static_cast<double>(rng() >> 11), -53);
}

std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n == 0) throw DomainError("uniform_index: empty range");
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t bound = n;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return static_cast<std::size_t>(draw % bound);
}

double uniform_real(Rng& rng, double lo, double hi) {
  if (!(lo <= hi)) throw DomainError("uniform_real: empty interval");
  return lo + (hi - lo) * uniform01(rng);
}

double gaussian(Rng& rng, double mu, double sigma) {
  // Box-Muller; u1 nudged away from 0 so log() stays finite.
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  if (u1 <= 0.0) u1 = std::ldexp(1.0, -53);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
  return mu + sigma * r * std::cos(theta);
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt_a, std::uint64_t salt_b) {
  std::uint64_t z = base;
  auto mix = [&z](std::uint64_t salt) {
    z += 0x9e3779b97f4a7c15ULL + salt;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
  };
  mix(salt_a);
  mix(salt_b);
  return z;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace ccr
