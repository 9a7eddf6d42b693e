#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "ousia/error.hpp"

// Self-contained deterministic random machinery. The standard <random>
// distributions are implementation-defined, so identical seeds would produce
// different shuffles/noise across standard libraries; everything here is pinned
// bit-for-bit by this header instead.
//
// Core generator: xoshiro256++ (Blackman & Vigna), state seeded via splitmix64.

namespace ousia {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Combine a base seed with a stream index (ensemble member, shuffle number,
// book hash) into an independent 64-bit seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64_next(s);
  s ^= 0x6a09e667f3bcc909ull + stream;  // golden-ratio offset keyed by stream
  std::uint64_t b = splitmix64_next(s);
  return a ^ (b + 0x9e3779b97f4a7c15ull * (stream + 1));
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64_next(s);
  }

  // Independent stream for (seed, stream) pairs; used for ensemble members and
  // shuffle realizations so members can be generated in any order.
  static Rng keyed(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix_seed(seed, stream));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform integer in [0, bound) without modulo bias (Lemire's method).
  std::uint64_t bounded(std::uint64_t bound) {
    if (bound == 0) raise(Errc::invalid_argument, "Rng::bounded: bound must be positive");
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = next();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; caches the second deviate.
  double gaussian() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();  // log(0) guard
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace ousia
