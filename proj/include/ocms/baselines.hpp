#pragma once

#include <cstdint>
#include <vector>

#include "ocms/cms.hpp"
#include "ocms/rng.hpp"

namespace ocms {

// Entry of the (unnormalized) Hadamard matrix of any power-of-two order:
// (-1)^popcount(row AND col).
int hadamard_entry(std::uint64_t row, std::uint64_t col);

// Smallest L with 2^L >= min_size. Requires min_size >= 1.
unsigned hadamard_exponent(std::uint64_t min_size);

// Hadamard encoding: client with value x picks a uniform coefficient index j
// (0 allowed) in a 2^L-point transform with 2^L >= d+1, reports the entry
// for row x+1 flipped with probability 1/(e^eps + 1).
struct HeReport {
  std::uint64_t j = 0;
  std::int8_t z = 0;  // +1 or -1
};
HeReport he_encode(std::uint64_t x, std::uint64_t d, double epsilon, Rng& rng);

// Frequency estimates for each x in x_set from HE reports. Each report
// contributes (a+1)/(a-1) * z * H[x+1, j], unbiased only when j ranges over
// the full transform including 0.
std::vector<double> he_estimate(const std::vector<std::uint64_t>& x_set,
                                std::uint64_t d, double epsilon,
                                const std::vector<HeReport>& reports);

// Recursive hashing + randomized response: split x = sigma*B + rho with
// B = 2^{b-1}, report a Hadamard coefficient of the quotient block signed by
// sigma, randomized over an alphabet of 2^b symbols.
struct RhrParams {
  unsigned b = 1;        // max(1, round(eps))
  std::uint64_t B = 1;   // 2^{b-1}
  unsigned L = 1;        // 2^L >= d/B + 2
  double epsilon = 1.0;
  std::uint64_t d = 2;
};
RhrParams rhr_params(double epsilon, std::uint64_t d);
// Same but with the alphabet exponent forced (for studying the b trade-off).
RhrParams rhr_params_forced(double epsilon, std::uint64_t d, unsigned b);

struct RhrReport {
  std::uint64_t j = 0;
  std::uint32_t z = 0;  // randomized symbol in [0, 2^b)
};
RhrReport rhr_encode(std::uint64_t x, const RhrParams& params, Rng& rng);

// Each report contributes decode(z == sym) - decode(z == anti) where sym and
// anti are the symbols x would emit with Hadamard sign +1 / -1; nonzero only
// on a symbol hit, scaled by H on the quotient row.
std::vector<double> rhr_estimate(const std::vector<std::uint64_t>& x_set,
                                 const RhrParams& params,
                                 const std::vector<RhrReport>& reports);

// Hashing + RR at the range m = round(1 + e^eps) that classic local hashing
// uses; shares the Report/client_encode/server_estimate pipeline.
EstimatorParams olh_params(double epsilon, std::uint64_t d);

// Effective range of two chained hash stages with ranges m1 and m2:
// m1*m2/(m1+m2-1). Accepts real-valued ranges (e.g. an m_prime).
double recursive_equivalent_m(double m1, double m2);

// Two-stage sketch: affine hash into m1 buckets, then Hadamard-encode the
// bucket over dictionary size m1 with the one-bit randomizer.
struct CmsHeParams {
  double epsilon = 1.0;
  std::uint64_t d = 2;
  std::uint64_t m1 = 1024;
  FieldSpec field;
  ApiStats stats;
};
CmsHeParams cms_he_params(double epsilon, std::uint64_t d, std::uint64_t m1);

struct CmsHeReport {
  std::uint64_t a0 = 0;
  std::uint64_t a1 = 0;
  std::uint64_t j = 0;
  std::int8_t z = 0;
};
CmsHeReport cms_he_encode(std::uint64_t x, const CmsHeParams& params,
                          Rng& rng);

// Debiases with the equivalent range of (stage-1 m_prime, 2).
std::vector<double> cms_he_estimate(const std::vector<std::uint64_t>& x_set,
                                    const CmsHeParams& params,
                                    const std::vector<CmsHeReport>& reports);

}  // namespace ocms
