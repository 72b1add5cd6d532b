#include "ocms/hashing.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace ocms {

HashFn sample_hash(const FieldSpec& field, std::uint64_t m, Rng& rng) {
  if (m < 1 || u128(m) > field.size())
    throw std::invalid_argument("sample_hash: need 1 <= m <= field size");
  HashFn h;
  h.a0 = sample_element(field, rng);
  h.a1 = sample_element(field, rng);
  h.field = field;
  h.m = m;
  return h;
}

std::uint64_t hash_eval(const HashFn& h, std::uint64_t x) {
  if (!h.field.element_ok(x))
    throw std::domain_error("hash_eval: input outside the field");
  return ff_add(h.field, h.a0, ff_mul(h.field, h.a1, x)) % h.m;
}

bool ApiStats::quality_ok(double tau) const {
  if (tau <= 0) throw std::invalid_argument("quality_ok: tau must be > 0");
  return 2.0 * double(q) + 1.0 > std::sqrt(1.0 / tau);
}

ApiStats api_stats(const FieldSpec& field, std::uint64_t m) {
  if (m < 2 || u128(m) > field.size())
    throw std::invalid_argument("api_stats: need 2 <= m <= field size");
  u128 size = field.size();
  ApiStats st;
  st.q = std::uint64_t(size / m);
  st.r = std::uint64_t(size - u128(st.q) * m);
  double qd = double(st.q), rd = double(st.r), md = double(m);
  double denom = md * qd + rd;  // == field size
  st.c_bar = ((2.0 * qd + 1.0) * rd + md * qd * qd) / (denom * denom);
  st.m_prime = 1.0 / st.c_bar;
  return st;
}

std::uint64_t family_bits(std::uint64_t d, std::uint64_t m) {
  if (d < 1 || m < 1)
    throw std::invalid_argument("family_bits: d and m must be >= 1");
  u128 v = u128(d) + 1;
  if (u128(m) * 5 > v) v = u128(m) * 5;
  u128 w = v - 1;
  std::uint64_t bits = 0;
  while (w) {
    ++bits;
    w >>= 1;
  }
  return 2 * bits;
}

std::uint64_t assignment_bits(std::uint64_t n, std::uint64_t k) {
  if (n < 1 || k < 1)
    throw std::invalid_argument("assignment_bits: n and k must be >= 1");
  return 2 * std::uint64_t(std::bit_width(n > k ? n : k));
}

AdversarialResult adversarial_dataset(std::uint64_t target_x,
                                      const std::vector<HashFn>& fns,
                                      std::uint64_t d) {
  if (d < 2) throw std::invalid_argument("adversarial_dataset: need d >= 2");
  if (target_x >= d)
    throw std::invalid_argument("adversarial_dataset: target_x must be < d");
  AdversarialResult res;
  res.values.reserve(fns.size());
  for (const HashFn& h : fns) {
    std::uint64_t bucket = hash_eval(h, target_x);
    bool found = false;
    for (std::uint64_t v = 0; v < d; ++v) {
      if (v == target_x) continue;
      if (hash_eval(h, v) == bucket) {
        res.values.push_back(v);
        found = true;
        break;
      }
    }
    if (!found) {
      ++res.failed;
      res.values.push_back(target_x == 0 ? 1 : 0);
    }
  }
  return res;
}

}  // namespace ocms
