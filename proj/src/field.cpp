#include "ocms/field.hpp"

#include <bit>
#include <stdexcept>

namespace ocms {
namespace {

// Low terms of the minimal-weight irreducible over GF(2) per degree
// (index 0 unused). Verified by a Rabin irreducibility check; trinomial
// x^l + x^k + 1 where one exists, else the lexicographically smallest
// pentanomial.
constexpr std::uint64_t kReductionPoly[65] = {
    0x0,        0x1,  0x3,   0x3,  0x3,   0x5,  0x3,  0x3,  0x1b, 0x3,
    0x9,        0x5,  0x9,   0x1b, 0x21,  0x3,  0x2b, 0x9,  0x9,  0x27,
    0x9,        0x5,  0x3,   0x21, 0x1b,  0x9,  0x1b, 0x27, 0x3,  0x5,
    0x3,        0x9,  0x8d,  0x401, 0x81, 0x5,  0x201, 0x53, 0x63, 0x11,
    0x39,       0x9,  0x81,  0x59, 0x21,  0x1b, 0x3,  0x21, 0x2d, 0x201,
    0x1d,       0x4b, 0x9,   0x47, 0x201, 0x81, 0x95, 0x11, 0x80001,
    0x95,       0x3,  0x27,  0x20000001, 0x3, 0x1b};

// a*b mod (2^64 - 59): fold 2^64 == 59 twice, absorb the last carry, one
// conditional subtract.
std::uint64_t mulmod_kprime(std::uint64_t a, std::uint64_t b) {
  u128 z = u128(a) * b;
  u128 w = u128(std::uint64_t(z >> 64)) * 59 + std::uint64_t(z);
  u128 t = u128(std::uint64_t(w >> 64)) * 59 + std::uint64_t(w);
  if (t >> 64) t = u128(std::uint64_t(t)) + 59;
  std::uint64_t r = std::uint64_t(t);
  if (r >= kPrime) r -= kPrime;
  return r;
}

std::uint64_t mulmod_generic(std::uint64_t a, std::uint64_t b,
                             std::uint64_t p) {
  return std::uint64_t((u128(a) * b) % p);
}

// Carry-less multiply, then replace each bit i >= l with poly << (i - l)
// (x^l == poly in the quotient ring).
std::uint64_t mul_binary(std::uint64_t a, std::uint64_t b, unsigned l,
                         std::uint64_t poly) {
  u128 prod = 0;
  u128 shifted = a;
  while (b) {
    if (b & 1) prod ^= shifted;
    shifted <<= 1;
    b >>= 1;
  }
  for (int i = 2 * int(l) - 2; i >= int(l); --i) {
    if ((prod >> i) & 1) {
      prod ^= u128(1) << i;
      prod ^= u128(poly) << (i - l);
    }
  }
  return std::uint64_t(prod);
}

}  // namespace

FieldSpec prime_field() { return prime_field(kPrime); }

FieldSpec prime_field(std::uint64_t p) {
  if (p < 2) throw std::invalid_argument("prime_field: modulus must be >= 2");
  FieldSpec f;
  f.kind = FieldKind::Prime;
  f.modulus = p;
  f.degree = 0;
  f.poly = 0;
  return f;
}

FieldSpec binary_field(unsigned degree) {
  FieldSpec f;
  f.kind = FieldKind::Binary;
  f.modulus = 0;
  f.degree = degree;
  f.poly = reduction_poly(degree);
  return f;
}

std::uint64_t reduction_poly(unsigned degree) {
  if (degree < 1 || degree > 64)
    throw std::invalid_argument("reduction_poly: degree must be in [1,64]");
  return kReductionPoly[degree];
}

std::uint64_t ff_add(const FieldSpec& f, std::uint64_t a, std::uint64_t b) {
  if (f.kind == FieldKind::Binary) return a ^ b;
  std::uint64_t s = a + b;
  if (s < a || s >= f.modulus) s -= f.modulus;
  return s;
}

std::uint64_t ff_mul(const FieldSpec& f, std::uint64_t a, std::uint64_t b) {
  if (f.kind == FieldKind::Binary) return mul_binary(a, b, f.degree, f.poly);
  if (f.modulus == kPrime) return mulmod_kprime(a, b);
  return mulmod_generic(a, b, f.modulus);
}

std::uint64_t ff_arith(FieldOp op, std::uint64_t a, std::uint64_t b,
                       const FieldSpec& f) {
  if (!f.element_ok(a) || !f.element_ok(b))
    throw std::domain_error("ff_arith: operand outside the field");
  return op == FieldOp::Add ? ff_add(f, a, b) : ff_mul(f, a, b);
}

FieldSpec finite_field_size(std::uint64_t d, std::uint64_t m) {
  if (d < 1 || m < 1)
    throw std::invalid_argument("finite_field_size: d and m must be >= 1");
  u128 v = u128(d) + 1;
  if (u128(m) * 5 > v) v = u128(m) * 5;
  if (v <= u128(kPrime)) return prime_field();
  // ceil(log2 v) as the position of the top bit of v-1, plus one.
  u128 w = v - 1;
  unsigned l = 0;
  while (w) {
    ++l;
    w >>= 1;
  }
  if (l > 64)
    throw std::domain_error("finite_field_size: needs more than 64 bits");
  return binary_field(l);
}

std::uint64_t sample_element(const FieldSpec& f, Rng& rng) {
  if (f.kind == FieldKind::Prime) return rng.next_below(f.modulus);
  if (f.degree == 64) return rng.next_u64();
  return rng.next_u64() & ((std::uint64_t(1) << f.degree) - 1);
}

}  // namespace ocms
