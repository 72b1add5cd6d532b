#include "ocms/analysis.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "ocms/cms.hpp"
#include "ocms/hashing.hpp"

namespace ocms {
namespace {

// Kahan-compensated accumulator for the cross-trial aggregations.
class Accumulator {
 public:
  void add(double v) {
    double y = v - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double sum() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 50.0)
    throw std::invalid_argument("epsilon must be in (0, 50]");
}

}  // namespace

EmpiricalLosses empirical_metrics(const std::vector<TrialMetrics>& trials) {
  if (trials.empty())
    throw std::invalid_argument("empirical_metrics: no trials");
  const TrialMetrics& head = trials.front();
  std::size_t items = head.x_set.size();
  if (items == 0 || head.estimates.size() != items ||
      head.truth.size() != items)
    throw std::invalid_argument("empirical_metrics: malformed trial");
  for (const TrialMetrics& t : trials) {
    if (t.algorithm != head.algorithm || t.epsilon != head.epsilon ||
        t.x_set != head.x_set || t.truth != head.truth ||
        t.estimates.size() != items)
      throw std::invalid_argument(
          "empirical_metrics: trials must share algorithm, epsilon, query "
          "set, and truth");
  }
  double tn = double(trials.size());
  EmpiricalLosses out;
  for (std::size_t i = 0; i < items; ++i) {
    Accumulator sq;
    for (const TrialMetrics& t : trials) {
      double err = t.estimates[i] - t.truth[i];
      sq.add(err * err);
    }
    out.worst_mse = std::max(out.worst_mse, sq.sum() / tn);
  }
  Accumulator l1, l2;
  for (const TrialMetrics& t : trials) {
    Accumulator abs_err, sq_err;
    for (std::size_t i = 0; i < items; ++i) {
      double err = t.estimates[i] - t.truth[i];
      abs_err.add(std::abs(err));
      sq_err.add(err * err);
    }
    l1.add(abs_err.sum());
    l2.add(sq_err.sum());
  }
  out.l1 = l1.sum() / tn;
  out.l2 = l2.sum() / tn;
  return out;
}

double mse_upper_bound(double variance, std::uint64_t t,
                       std::uint64_t x_count) {
  if (!(variance >= 0.0))
    throw std::invalid_argument("mse_upper_bound: variance must be >= 0");
  if (t < 1 || x_count < 1)
    throw std::invalid_argument("mse_upper_bound: t and x_count must be >= 1");
  double lg = std::log(20.0 * double(x_count));
  double factor =
      1.0 + (2.0 / double(t)) * (std::sqrt(double(t) * lg) + lg);
  return variance * factor;
}

TheoryRow theory_table(Algorithm alg, std::uint64_t d, double epsilon,
                       std::uint64_t n) {
  check_epsilon(epsilon);
  if (d < 2) throw std::invalid_argument("theory_table: d must be >= 2");
  if (n < 1) throw std::invalid_argument("theory_table: n must be >= 1");
  double a = std::exp(epsilon);
  double s = std::exp(epsilon / 2.0);
  double dd = double(d), nn = double(n), rn = std::sqrt(nn);
  double he_mse = (a + 1.0) * (a + 1.0) / (nn * (a - 1.0) * (a - 1.0));
  double ocms_mse = s / (nn * (s - 1.0) * (s - 1.0));
  TheoryRow row;
  row.small_d_flag = dd < 10.0 * a;
  switch (alg) {
    case Algorithm::HE:
    case Algorithm::CmsHe:
      row.l1 = dd * (a + 1.0) / (rn * (a - 1.0));
      row.l2 = dd * (a + 1.0) * (a + 1.0) / (nn * (a - 1.0) * (a - 1.0));
      row.mse = he_mse;
      break;
    case Algorithm::RHR: {
      double cap = std::min(epsilon, epsilon * epsilon);
      row.l1 = dd / std::sqrt(nn * cap);
      row.l2 = dd / (nn * cap);
      row.mse = he_mse;
      row.mse_is_lower_bound = true;
      break;
    }
    case Algorithm::OLH:
    case Algorithm::SS:
    case Algorithm::ARappor:
      row.l1 = 2.0 * dd * s / (rn * (a - 1.0));
      row.l2 = 4.0 * dd * a / (nn * (a - 1.0) * (a - 1.0));
      row.mse = he_mse;
      break;
    case Algorithm::OcmsMse:
    case Algorithm::OcmsL:
      row.l1 = 2.0 * dd * s / (rn * (a - 1.0));
      row.l2 = 4.0 * dd * a / (nn * (a - 1.0) * (a - 1.0));
      row.mse = ocms_mse;
      break;
    case Algorithm::Rappor:
      row.l1 = dd * std::exp(epsilon / 4.0) / (rn * (s - 1.0));
      row.l2 = dd * s / (nn * (s - 1.0) * (s - 1.0));
      row.mse = ocms_mse;
      break;
    case Algorithm::OriginalCms:
      throw std::invalid_argument(
          "theory_table: no closed-form losses for the biased sketch");
  }
  return row;
}

double comm_cost(Algorithm alg, std::uint64_t d, double epsilon,
                 std::uint64_t m) {
  check_epsilon(epsilon);
  if (d < 2) throw std::invalid_argument("comm_cost: d must be >= 2");
  double a = std::exp(epsilon);
  double dd = double(d);
  double lg_d = std::log2(dd);
  switch (alg) {
    case Algorithm::HE:
      return lg_d;
    case Algorithm::RHR:
      return lg_d + epsilon;
    case Algorithm::OLH:
      return dd * epsilon;
    case Algorithm::OcmsMse:
      return std::max(2.0 * lg_d + epsilon / 2.0, 1.5 * epsilon + 6.0);
    case Algorithm::OcmsL:
      return std::max(2.0 * lg_d + epsilon, 3.0 * epsilon + 6.0);
    case Algorithm::SS:
      return dd / (1.0 + a);
    case Algorithm::Rappor:
      return dd;
    case Algorithm::CmsHe:
    case Algorithm::ARappor:
      throw std::invalid_argument(
          "comm_cost: no communication-cost row for this algorithm");
    case Algorithm::OriginalCms:
      if (m < 2)
        throw std::invalid_argument(
            "comm_cost: the per-report hash table needs m >= 2");
      return dd * std::log2(double(m));
  }
  throw std::invalid_argument("comm_cost: unknown algorithm");
}

ReportAudit audit_report_bits(const EstimatorParams& params) {
  ReportAudit out;
  out.info_bits = double(family_bits(params.d, params.m)) +
                  double(std::bit_width(params.m - 1));
  out.packed_bits = 160;  // u32 z + u64 a0 + u64 a1
  return out;
}

}  // namespace ocms
