#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace fairbid {

/// Splitmix64 finalizer; full-avalanche 64-bit mix.
inline constexpr uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from (seed, hi, lo). Used to key
/// per-round, per-stream generators so that simulation variants sharing a
/// seed consume byte-identical random sequences.
inline constexpr uint64_t derive_stream(uint64_t seed, uint64_t hi, uint64_t lo) {
  uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ull);
  h = mix64(h ^ (hi + 0xbf58476d1ce4e5b9ull));
  h = mix64(h ^ (lo + 0x94d049bb133111ebull));
  return h;
}

double normal_quantile(double p);

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

/// Small counter-based generator (splitmix64). Deterministic across
/// platforms, fixed consumption per draw: one 64-bit word per variate.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    return mix64(z);
  }

  /// Uniform on the open interval (0, 1).
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  double normal() { return normal_quantile(uniform01()); }

  double lognormal(double mu, double sigma) {
    return std::exp(mu + sigma * normal());
  }

  /// Uniform index in [0, n).
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  /// Number of rounds survived when each round continues with probability
  /// delta; support {1, 2, ...}. P(T >= t) = delta^(t-1).
  long geometric_lifespan(double delta) {
    if (delta < 0.0 || delta >= 1.0)
      throw std::invalid_argument("geometric_lifespan: delta must be in [0,1)");
    if (delta == 0.0) return 1;
    double u = uniform01();
    double t = std::floor(std::log(u) / std::log(delta));
    if (t > 1e18) return static_cast<long>(1e18);
    return 1 + static_cast<long>(t);
  }

 private:
  uint64_t state_;
};

}  // namespace fairbid
