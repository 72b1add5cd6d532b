#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ocms {

// One trial's estimates for a fixed query set, with the ground truth.
struct TrialMetrics {
  std::string algorithm;
  double epsilon = 0.0;
  std::uint64_t trial = 0;
  std::vector<std::uint64_t> x_set;
  std::vector<double> estimates;
  std::vector<double> truth;
};

struct EmpiricalLosses {
  double worst_mse = 0.0;  // max over items of the mean squared error
  double l1 = 0.0;         // mean over trials of the summed absolute error
  double l2 = 0.0;         // mean over trials of the summed squared error
};

// All trials must share the algorithm, epsilon, x_set, and truth.
EmpiricalLosses empirical_metrics(const std::vector<TrialMetrics>& trials);

// High-probability ceiling for an empirical max-MSE over x_count items
// measured with t trials, given the true per-item variance V:
//   V * (1 + (2/t)(sqrt(t ln(20 x_count)) + ln(20 x_count))).
double mse_upper_bound(double variance, std::uint64_t t,
                       std::uint64_t x_count);

enum class Algorithm {
  HE,
  RHR,
  OLH,
  OcmsMse,
  OcmsL,
  CmsHe,
  SS,
  ARappor,
  Rappor,
  OriginalCms,
};

// Predicted losses (l1, l2 summed over a dictionary of size d; mse per item)
// at population n. mse_is_lower_bound marks entries known only as bounds.
// small_d_flag warns when d < 10 e^eps, where large-d forms are loose.
struct TheoryRow {
  double l1 = 0.0;
  double l2 = 0.0;
  double mse = 0.0;
  bool mse_is_lower_bound = false;
  bool small_d_flag = false;
};
TheoryRow theory_table(Algorithm alg, std::uint64_t d, double epsilon,
                       std::uint64_t n);

// Per-report communication cost in bits. m is only consulted for
// OriginalCms (its report is a full m-range hash table row). CmsHe and
// ARappor have no cost row and throw.
double comm_cost(Algorithm alg, std::uint64_t d, double epsilon,
                 std::uint64_t m = 0);

// Information content vs. wire size of one sketch report.
struct ReportAudit {
  double info_bits = 0.0;         // hash description + ceil(log2 m)
  std::uint64_t packed_bits = 0;  // fixed binary layout (z,a0,a1)
};
struct EstimatorParams;  // defined in cms.hpp
ReportAudit audit_report_bits(const EstimatorParams& params);

// One summary row per (algorithm, epsilon): empirical losses next to the
// matching predictions.
struct LossSummary {
  std::string algorithm;
  double epsilon = 0.0;
  EmpiricalLosses empirical;
  double theory_mse = 0.0;
  double theory_l1_upper = 0.0;
  double theory_l2 = 0.0;
  double mse_upper_bound = 0.0;
};

}  // namespace ocms
