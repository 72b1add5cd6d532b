#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace ocms {

// splitmix64 finalizer; full-period mixer, used both as the generator step and
// for deriving stream keys.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic generator. Hand-rolled sampling on purpose: std::*_distribution
// algorithms are implementation-defined, and experiment outputs must be
// byte-identical for a given seed. splitmix64 is cheap enough to reseed per
// client, which is what the harness does.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  // Uniform in [0,1), 53 bits.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bernoulli(double p) { return next_double() < p; }

  // Unbiased uniform draw from [0,n). Rejects draws below 2^64 mod n.
  std::uint64_t next_below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Marsaglia polar method; one spare kept.
  double next_normal(double mu, double sigma) {
    if (have_spare_) {
      have_spare_ = false;
      return mu + sigma * spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double k = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * k;
    have_spare_ = true;
    return mu + sigma * u * k;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Order-sensitive key derivation (hash_combine style over mix64).
inline std::uint64_t derive_key(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243f6a8885a308d3ull;
  for (std::uint64_t p : parts)
    h = mix64(h ^ (p + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
  return h;
}

// Per-client stream for the experiment harness. The key tuple is exactly
// (seed, epsilon index, trial, client index); reseeding per client makes the
// report stream independent of evaluation order.
inline Rng stream_rng(std::uint64_t seed, std::uint64_t eps_index,
                      std::uint64_t trial, std::uint64_t client) {
  return Rng(derive_key({seed, eps_index, trial, client}));
}

}  // namespace ocms
