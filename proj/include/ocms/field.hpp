#pragma once

#include <cstdint>

#include "ocms/rng.hpp"

namespace ocms {

using u128 = unsigned __int128;

// Largest prime below 2^64. Every dictionary that fits in 64 bits lands here;
// binary fields only kick in when max(d+1, 5m) exceeds it.
inline constexpr std::uint64_t kPrime = 0xffffffffffffffc5ull;  // 2^64 - 59

enum class FieldKind { Prime, Binary };

// A field an element of which fits in one u64. Prime fields are Z/p; binary
// fields are GF(2^l) with a fixed low-weight irreducible reduction polynomial
// per degree (see reduction_poly()). `poly` stores the terms below x^l.
struct FieldSpec {
  FieldKind kind = FieldKind::Prime;
  std::uint64_t modulus = kPrime;  // Prime only
  unsigned degree = 0;             // Binary only, 1..64
  std::uint64_t poly = 0;          // Binary only

  u128 size() const {
    return kind == FieldKind::Prime ? u128(modulus) : u128(1) << degree;
  }
  bool element_ok(std::uint64_t v) const { return u128(v) < size(); }
  bool operator==(const FieldSpec&) const = default;
};

FieldSpec prime_field();                 // Z/kPrime
FieldSpec prime_field(std::uint64_t p);  // small primes, used by tests
FieldSpec binary_field(unsigned degree);

// Fixed reduction polynomial for GF(2^l), low terms only (bit i = coeff of
// x^i, the leading x^l is implicit). Each entry is the minimal-weight
// irreducible: trinomial where one exists, else pentanomial.
std::uint64_t reduction_poly(unsigned degree);

std::uint64_t ff_add(const FieldSpec& f, std::uint64_t a, std::uint64_t b);
std::uint64_t ff_mul(const FieldSpec& f, std::uint64_t a, std::uint64_t b);

enum class FieldOp { Add, Mul };
std::uint64_t ff_arith(FieldOp op, std::uint64_t a, std::uint64_t b,
                       const FieldSpec& f);

// Smallest usable field for a dictionary of size d hashed into m buckets:
// v = max(d+1, 5m). Prime field whenever v <= kPrime, else GF(2^l) with
// l = ceil(log2 v) (l = 64 permitted).
FieldSpec finite_field_size(std::uint64_t d, std::uint64_t m);

std::uint64_t sample_element(const FieldSpec& f, Rng& rng);

}  // namespace ocms
