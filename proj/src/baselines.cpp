#include "ocms/baselines.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "ocms/ldp.hpp"

namespace ocms {
namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 50.0)
    throw std::invalid_argument("epsilon must be in (0, 50]");
}

std::uint64_t uniform_index(unsigned exponent, Rng& rng) {
  if (exponent >= 64) return rng.next_u64();
  return rng.next_below(std::uint64_t(1) << exponent);
}

}  // namespace

int hadamard_entry(std::uint64_t row, std::uint64_t col) {
  return (std::popcount(row & col) & 1) ? -1 : 1;
}

unsigned hadamard_exponent(std::uint64_t min_size) {
  if (min_size < 1)
    throw std::invalid_argument("hadamard_exponent: size must be >= 1");
  return unsigned(std::bit_width(min_size - 1));
}

HeReport he_encode(std::uint64_t x, std::uint64_t d, double epsilon,
                   Rng& rng) {
  check_epsilon(epsilon);
  if (d < 1 || d >= (std::uint64_t(1) << 62))
    throw std::invalid_argument("he_encode: d out of range");
  if (x >= d) throw std::invalid_argument("he_encode: x must be < d");
  unsigned L = hadamard_exponent(d + 1);
  HeReport rep;
  rep.j = uniform_index(L, rng);
  int w = hadamard_entry(x + 1, rep.j);
  double a = std::exp(epsilon);
  if (rng.next_bernoulli(1.0 / (a + 1.0))) w = -w;
  rep.z = std::int8_t(w);
  return rep;
}

std::vector<double> he_estimate(const std::vector<std::uint64_t>& x_set,
                                std::uint64_t d, double epsilon,
                                const std::vector<HeReport>& reports) {
  check_epsilon(epsilon);
  if (d < 1) throw std::invalid_argument("he_estimate: d must be >= 1");
  if (reports.empty()) throw std::invalid_argument("he_estimate: no reports");
  unsigned L = hadamard_exponent(d + 1);
  for (const HeReport& rep : reports) {
    if (rep.z != 1 && rep.z != -1)
      throw std::invalid_argument("he_estimate: z must be +1 or -1");
    if (L < 64 && rep.j >= (std::uint64_t(1) << L))
      throw std::invalid_argument("he_estimate: coefficient index too large");
  }
  double a = std::exp(epsilon);
  double factor = (a + 1.0) / (a - 1.0);
  double n = double(reports.size());
  std::vector<double> out;
  out.reserve(x_set.size());
  for (std::uint64_t x : x_set) {
    if (x >= d) throw std::invalid_argument("he_estimate: query outside d");
    std::int64_t sum = 0;
    for (const HeReport& rep : reports)
      sum += rep.z * hadamard_entry(x + 1, rep.j);
    out.push_back(factor * double(sum) / n);
  }
  return out;
}

RhrParams rhr_params(double epsilon, std::uint64_t d) {
  unsigned b = unsigned(std::max<long long>(1, std::llround(epsilon)));
  return rhr_params_forced(epsilon, d, b);
}

RhrParams rhr_params_forced(double epsilon, std::uint64_t d, unsigned b) {
  check_epsilon(epsilon);
  if (d < 2) throw std::invalid_argument("rhr_params: d must be >= 2");
  if (b < 1 || b > 32)
    throw std::invalid_argument("rhr_params: alphabet exponent out of range");
  RhrParams p;
  p.b = b;
  p.B = std::uint64_t(1) << (b - 1);
  p.L = hadamard_exponent(d / p.B + 2);
  p.epsilon = epsilon;
  p.d = d;
  return p;
}

RhrReport rhr_encode(std::uint64_t x, const RhrParams& params, Rng& rng) {
  if (x >= params.d) throw std::invalid_argument("rhr_encode: x must be < d");
  std::uint64_t quot = x / params.B;
  std::uint64_t rho = x % params.B;
  RhrReport rep;
  rep.j = uniform_index(params.L, rng);
  int sigma = hadamard_entry(quot + 1, rep.j);
  std::uint64_t sym = (sigma == -1 ? params.B : 0) + rho;
  rep.z = std::uint32_t(
      rr_perturb(sym, params.epsilon, 2 * params.B, rng));
  return rep;
}

std::vector<double> rhr_estimate(const std::vector<std::uint64_t>& x_set,
                                 const RhrParams& params,
                                 const std::vector<RhrReport>& reports) {
  if (reports.empty())
    throw std::invalid_argument("rhr_estimate: no reports");
  std::uint64_t m = 2 * params.B;
  for (const RhrReport& rep : reports) {
    if (rep.z >= m)
      throw std::invalid_argument("rhr_estimate: symbol out of range");
    if (params.L < 64 && rep.j >= (std::uint64_t(1) << params.L))
      throw std::invalid_argument("rhr_estimate: coefficient index too large");
  }
  double a = std::exp(params.epsilon);
  // Per-report decode difference between the symbol x would emit under a +1
  // Hadamard sign and under a -1 sign; only symbol hits contribute.
  double gap = (a + double(m) - 1.0) / (a - 1.0);
  double n = double(reports.size());
  std::vector<double> out;
  out.reserve(x_set.size());
  for (std::uint64_t x : x_set) {
    if (x >= params.d)
      throw std::invalid_argument("rhr_estimate: query outside d");
    std::uint64_t quot = x / params.B;
    std::uint64_t rho = x % params.B;
    std::int64_t hits = 0;
    for (const RhrReport& rep : reports) {
      int sigma = hadamard_entry(quot + 1, rep.j);
      std::uint64_t sym_match = (sigma == -1 ? params.B : 0) + rho;
      std::uint64_t sym_anti = (sigma == -1 ? 0 : params.B) + rho;
      if (rep.z == sym_match)
        ++hits;
      else if (rep.z == sym_anti)
        --hits;
    }
    out.push_back(double(hits) * gap / n);
  }
  return out;
}

EstimatorParams olh_params(double epsilon, std::uint64_t d) {
  check_epsilon(epsilon);
  double m_real = 1.0 + std::exp(epsilon);
  if (m_real > 4294967295.0)
    throw std::invalid_argument("olh_params: hash range exceeds 32 bits");
  return make_params(epsilon, d, RangeMode::FixedM, 1.0,
                     std::uint64_t(std::llround(m_real)), false);
}

double recursive_equivalent_m(double m1, double m2) {
  if (!(m1 > 1.0) || !(m2 > 1.0))
    throw std::invalid_argument("recursive_equivalent_m: ranges must be > 1");
  return m1 * m2 / (m1 + m2 - 1.0);
}

CmsHeParams cms_he_params(double epsilon, std::uint64_t d, std::uint64_t m1) {
  check_epsilon(epsilon);
  if (d < 2) throw std::invalid_argument("cms_he_params: d must be >= 2");
  if (m1 < 2) throw std::invalid_argument("cms_he_params: m1 must be >= 2");
  CmsHeParams p;
  p.epsilon = epsilon;
  p.d = d;
  p.m1 = m1;
  p.field = finite_field_size(d, m1);
  p.stats = api_stats(p.field, m1);
  return p;
}

CmsHeReport cms_he_encode(std::uint64_t x, const CmsHeParams& params,
                          Rng& rng) {
  if (x >= params.d)
    throw std::invalid_argument("cms_he_encode: x must be < d");
  CmsHeReport rep;
  rep.a0 = sample_element(params.field, rng);
  rep.a1 = sample_element(params.field, rng);
  std::uint64_t bucket =
      ff_add(params.field, rep.a0, ff_mul(params.field, rep.a1, x)) %
      params.m1;
  unsigned L = hadamard_exponent(params.m1 + 1);
  rep.j = uniform_index(L, rng);
  int w = hadamard_entry(bucket + 1, rep.j);
  double a = std::exp(params.epsilon);
  if (rng.next_bernoulli(1.0 / (a + 1.0))) w = -w;
  rep.z = std::int8_t(w);
  return rep;
}

std::vector<double> cms_he_estimate(const std::vector<std::uint64_t>& x_set,
                                    const CmsHeParams& params,
                                    const std::vector<CmsHeReport>& reports) {
  if (reports.empty())
    throw std::invalid_argument("cms_he_estimate: no reports");
  unsigned L = hadamard_exponent(params.m1 + 1);
  for (const CmsHeReport& rep : reports) {
    if (rep.z != 1 && rep.z != -1)
      throw std::invalid_argument("cms_he_estimate: z must be +1 or -1");
    if (L < 64 && rep.j >= (std::uint64_t(1) << L))
      throw std::invalid_argument(
          "cms_he_estimate: coefficient index too large");
    if (!params.field.element_ok(rep.a0) || !params.field.element_ok(rep.a1))
      throw std::invalid_argument("cms_he_estimate: hash outside the field");
  }
  // The hash stage and the one-bit Hadamard stage chain into one equivalent
  // range; its reciprocal is the composed collision probability.
  double m_eq = recursive_equivalent_m(params.stats.m_prime, 2.0);
  double a = std::exp(params.epsilon);
  double dec_eq = a / (a - 1.0);
  double dec_neq = -1.0 / (a - 1.0);
  double n = double(reports.size());
  std::vector<double> out;
  out.reserve(x_set.size());
  for (std::uint64_t x : x_set) {
    if (x >= params.d)
      throw std::invalid_argument("cms_he_estimate: query outside d");
    std::uint64_t cnt = 0;
    for (const CmsHeReport& rep : reports) {
      std::uint64_t bucket =
          ff_add(params.field, rep.a0, ff_mul(params.field, rep.a1, x)) %
          params.m1;
      cnt += (rep.z == hadamard_entry(bucket + 1, rep.j));
    }
    double dbar =
        (double(cnt) * dec_eq + (n - double(cnt)) * dec_neq) / n;
    out.push_back((m_eq * dbar - 1.0) / (m_eq - 1.0));
  }
  return out;
}

}  // namespace ocms
