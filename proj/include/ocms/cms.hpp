#pragma once

#include <cstdint>
#include <vector>

#include "ocms/field.hpp"
#include "ocms/hashing.hpp"
#include "ocms/rng.hpp"

namespace ocms {

// How the hash range m is chosen.
enum class RangeMode {
  MseOpt,  // minimize worst-case per-item MSE given a frequency cap f_star
  LOpt,    // minimize summed l2 loss over a dictionary of size d
  FixedM,  // caller-supplied m
};

struct EstimatorParams {
  double epsilon = 1.0;
  std::uint64_t d = 2;
  RangeMode mode = RangeMode::MseOpt;
  double f_star = 1.0;
  bool clip = false;
  std::uint64_t m = 2;
  FieldSpec field;
  ApiStats stats;
};

// Resolves m (via hash_range unless FixedM), the field (finite_field_size),
// and the collision stats. Requires 0 < eps <= 50, d >= 2, f_star in [0,1];
// fixed_m is required for FixedM and must fit in 32 bits.
EstimatorParams make_params(double epsilon, std::uint64_t d, RangeMode mode,
                            double f_star = 1.0, std::uint64_t fixed_m = 0,
                            bool clip = false);

// Integer hash range minimizing the mode's objective. The real-valued
// optimum is bracketed and both floor and ceil are scored; ties round
// half away from zero. Result is clamped to >= 2.
// MseOpt ignores d; LOpt ignores f_star.
std::uint64_t hash_range(double epsilon, std::uint64_t d, double f_star,
                         RangeMode mode);

// One client report: the perturbed bucket plus the hash that produced it.
struct Report {
  std::uint32_t z = 0;
  std::uint64_t a0 = 0;
  std::uint64_t a1 = 0;
};

// Samples a fresh hash, buckets x, and applies randomized response.
// Requires x < d.
Report client_encode(std::uint64_t x, const EstimatorParams& params, Rng& rng);

// Frequency estimates for each x in x_set: average the per-report RR decodes
// against each report's own hash of x, then debias the hash collisions with
// m_prime. clip (from params) truncates to [0,1].
std::vector<double> server_estimate(const std::vector<std::uint64_t>& x_set,
                                    const std::vector<Report>& reports,
                                    const EstimatorParams& params);

// Predicted estimator variance for an item of frequency f under RR with an
// exactly pairwise-independent hash of (possibly non-integer) range m:
//   (1-f)/(n(m-1)) + m[(1-f)(a-1)(2-m) + m a]/(n(m-1)(a-1)^2),  a = e^eps.
double predict_variance(double f, double epsilon, double m, std::uint64_t n);

// Same prediction with the mechanism's decode variances and the hash family's
// collision probability c_bar supplied separately:
//   m^2/((m-1)^2 n) [ f var_eq
//     + (1-f)(c_bar var_eq + (1-c_bar) var_neq + c_bar(1-c_bar)) ].
double predict_variance_general(double f_x, double var_eq, double var_neq,
                                double c_bar, double m, std::uint64_t n);

// Expected estimate under a non-uniform collision profile:
//   m/(m-1) [ f(x) + sum_{x' != x} c_bar(x,x') f(x') ] - 1/(m-1).
// c_matrix must be symmetric with unit diagonal; f_vec holds the true
// frequencies; returns one expectation per item.
std::vector<double> predict_expectation(
    const std::vector<std::vector<double>>& c_matrix,
    const std::vector<double>& f_vec, double m);

// Worst-case per-item MSE at the MSE-optimal m, over items of frequency at
// most f_star, with delta = (max frequency actually present) - f_star >= 0
// contributing a bias term when f_star <= 1/2.
double worst_case_mse(double epsilon, std::uint64_t n, double f_star,
                      double delta = 0.0);

// Loss bounds at the l-optimal m over a dictionary of size d.
struct OptimalLosses {
  double l2_star = 0.0;   // exact summed-variance bound at the optimal m
  double l1_upper = 0.0;  // sqrt(d * l2_star)
  double l2_limit = 0.0;  // large-d asymptote 4 d a / (n (a-1)^2)
  double l1_limit = 0.0;  // large-d asymptote 2 d s / (sqrt(n) (a-1))
};
OptimalLosses optimal_losses(double epsilon, std::uint64_t n, std::uint64_t d);

// Tail bound P(|est - f| >= alpha * sqrt(Var)) <= 2 exp(-alpha^2/3 *
// (m-1)/(a+m-1)). alpha must lie in [0, sqrt(a n/(m-1))].
double concentration_bound(double alpha, double epsilon, std::uint64_t m,
                           std::uint64_t n);

// Bias and variance of the collision bias term in a count-mean sketch with k
// independent hashes of range m, for target item x under frequencies f.
struct BiasStats {
  double mean = 0.0;
  double variance = 0.0;
};
BiasStats original_cms_bias_stats(const std::vector<double>& f,
                                  std::uint64_t m, std::uint64_t k,
                                  std::uint64_t x);

}  // namespace ocms
