#pragma once

#include <cstdint>
#include <vector>

#include "ocms/rng.hpp"

namespace ocms {

// Local randomizers over a dictionary of size m.
enum class Mechanism {
  RR,                // generalized randomized response
  SymmetricRappor,   // bitwise, both flip probabilities 1/(e^{eps/2}+1)
  AsymmetricRappor,  // bitwise, true 1 kept w.p. 1/2, 0 flipped w.p. 1/(e^eps+1)
};

struct MechanismSpec {
  Mechanism kind = Mechanism::RR;
  double epsilon = 1.0;
  std::uint64_t m = 2;
};

// Generalized randomized response: keep y with probability e^eps/(e^eps+m-1),
// otherwise report one of the other m-1 symbols uniformly.
// Requires 0 < eps <= 50, m >= 2, y < m.
std::uint64_t rr_perturb(std::uint64_t y, double epsilon, std::uint64_t m,
                         Rng& rng);

// Unbiased per-report decode for RR: (e^eps + m - 2)/(e^eps - 1) on a match,
// -1/(e^eps - 1) otherwise. Averaging decodes over reports estimates the
// frequency of y among the true inputs.
double rr_decode(bool match, double epsilon, std::uint64_t m);

// Per-report decode variances conditioned on whether the true value equals
// the queried one.
struct ResponseVariances {
  double var_eq = 0.0;
  double var_neq = 0.0;
};

// RR: var_eq = a(m-1)/(a-1)^2, var_neq = (a+m-2)/(a-1)^2 with a = e^eps.
// SymmetricRappor: both s/(s-1)^2 with s = e^{eps/2}.
// AsymmetricRappor: var_eq = (a+1)^2/(a-1)^2, var_neq = 4a/(a-1)^2.
ResponseVariances mechanism_variances(const MechanismSpec& spec);

using Matrix = std::vector<std::vector<double>>;

// P maps true-value distributions to response distributions (columns sum to
// 1); Q = (P^T P)^{-1} P^T is the least-squares decoder with Q P = I.
struct TransitionMatrix {
  Matrix P;
  Matrix Q;
};

// Validates P (entries in [0,1], columns sum to ~1, full column rank) and
// returns it with its decoder. Throws std::invalid_argument on bad input.
TransitionMatrix build_decoder(const Matrix& p);

// The m-by-m RR transition matrix for spec (RR only).
TransitionMatrix rr_transition(const MechanismSpec& spec);

}  // namespace ocms
