#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace rtsim {

// Deterministic counter-free PRNG (xoshiro256**) with explicit stream
// derivation. Streams are derived from (seed, key...) so that per-zone,
// per-person or per-iteration work is reproducible regardless of scheduling
// order. No libstdc++ distribution object is used anywhere: their output is
// implementation defined, ours must be stable.
class Rng {
public:
  Rng() : Rng(0) {}
  explicit Rng(std::uint64_t seed) { seed_from(seed); }

  // Derive an independent stream keyed by up to three sub-keys.
  static Rng derive(std::uint64_t seed, std::uint64_t k1 = 0, std::uint64_t k2 = 0,
                    std::uint64_t k3 = 0) {
    std::uint64_t state = seed;
    state = splitmix(state ^ (0x9e3779b97f4a7c15ULL + k1));
    state = splitmix(state ^ (0xbf58476d1ce4e5b9ULL + k2));
    state = splitmix(state ^ (0x94d049bb133111ebULL + k3));
    Rng r;
    r.seed_from(state);
    return r;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Box-Muller without spare caching; consumes two draws per call.
  double normal(double mean, double stddev) {
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * M_PI * u2);
  }

  // Index drawn with probability weights[i] / sum(weights). Weights must be
  // non-negative with a positive sum.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform01() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  void seed_from(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& s : s_) {
      sm += 0x9e3779b97f4a7c15ULL;
      s = splitmix(sm);
    }
  }

  std::uint64_t s_[4];
};

// Stable 64-bit content hash (FNV-1a); used for manifests and jitter keys.
inline std::uint64_t fnv1a64(std::span<const char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace rtsim
