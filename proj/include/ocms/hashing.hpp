#pragma once

#include <cstdint>
#include <vector>

#include "ocms/field.hpp"
#include "ocms/rng.hpp"

namespace ocms {

// One member of the affine family h(x) = ((a0 + a1*x) over the field) mod m.
// Pairwise independent on field elements before the mod-m fold; the fold makes
// it only approximately so, quantified by ApiStats.
struct HashFn {
  std::uint64_t a0 = 0;
  std::uint64_t a1 = 0;
  FieldSpec field;
  std::uint64_t m = 2;
};

// Requires 1 <= m <= field size. a0, a1 uniform over the field.
HashFn sample_hash(const FieldSpec& field, std::uint64_t m, Rng& rng);

// Requires x < field size (values are 0-based field elements).
std::uint64_t hash_eval(const HashFn& h, std::uint64_t x);

// Collision profile of the mod-m fold. With q = floor(size/m) and
// r = size mod m, any two distinct inputs collide with probability
// c_bar = ((2q+1)r + m q^2) / (mq + r)^2 exactly (the fold is the only source
// of non-uniformity; the affine map itself is uniform on pairs). The effective
// range m_prime = 1/c_bar is what the estimator debiases with.
struct ApiStats {
  std::uint64_t q = 0;
  std::uint64_t r = 0;
  double c_bar = 0.0;
  double m_prime = 0.0;

  // True when the fold's skew is below tau: 2q+1 > sqrt(1/tau).
  bool quality_ok(double tau) const;
};

// Requires 2 <= m <= field size.
ApiStats api_stats(const FieldSpec& field, std::uint64_t m);

// Bits to describe one hash function: two field elements,
// 2 * ceil(log2(max(d+1, 5m))).
std::uint64_t family_bits(std::uint64_t d, std::uint64_t m);

// Bits to assign k precomputed hash functions across n clients,
// 2 * ceil(log2(max(n,k)+1)).
std::uint64_t assignment_bits(std::uint64_t n, std::uint64_t k);

// Poisoning construction: every client reports a value != target_x that its
// fixed hash maps onto target_x's bucket (scanning values upward). Clients
// whose hash isolates the target get the smallest non-target value and are
// counted in `failed`.
struct AdversarialResult {
  std::vector<std::uint64_t> values;
  std::uint64_t failed = 0;
};
AdversarialResult adversarial_dataset(std::uint64_t target_x,
                                      const std::vector<HashFn>& fns,
                                      std::uint64_t d);

}  // namespace ocms
