#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ccr {

// All randomness flows through a single engine type.  Distribution
// helpers are hand-rolled because std::uniform_* and std::normal_distribution
// are not guaranteed to produce identical streams across standard libraries,
// and run outputs must be reproducible from (seed, rule, repetition) alone.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

/// Uniform double in [0, 1).
double uniform01(Rng& rng);

/// Uniform integer in [0, n).  n must be > 0.
std::size_t uniform_index(Rng& rng, std::size_t n);

/// Uniform double in [lo, hi).
double uniform_real(Rng& rng, double lo, double hi);

/// Gaussian draw via Box-Muller (two uniforms per call, no cached spare).
double gaussian(Rng& rng, double mu, double sigma);

/// splitmix64-style avalanche, used to derive independent per-run seeds.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt_a, std::uint64_t salt_b = 0);

/// FNV-1a over bytes; stable across platforms, used to salt seeds by rule name.
std::uint64_t fnv1a(std::string_view text);

}  // namespace ccr
