#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ocms/analysis.hpp"
#include "ocms/cms.hpp"

using namespace ocms;

namespace {

TrialMetrics trial(double e0, double e1) {
  TrialMetrics t;
  t.algorithm = "X";
  t.epsilon = 1.0;
  t.x_set = {3, 7};
  t.truth = {0.6, 0.4};
  t.estimates = {0.6 + e0, 0.4 + e1};
  return t;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("empirical losses from hand-built trials") {
  // Two trials with symmetric errors of 0.1: each item's MSE is 0.01,
  // each trial's absolute sum is 0.2 and squared sum is 0.02.
  std::vector<TrialMetrics> trials = {trial(0.1, -0.1), trial(-0.1, 0.1)};
  EmpiricalLosses el = empirical_metrics(trials);
  CHECK(el.worst_mse == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(el.l1 == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(el.l2 == doctest::Approx(0.02).epsilon(1e-12));

  // Uneven errors: worst item dominates the max.
  std::vector<TrialMetrics> uneven = {trial(0.3, 0.0), trial(0.3, 0.0)};
  CHECK(empirical_metrics(uneven).worst_mse ==
        doctest::Approx(0.09).epsilon(1e-12));

  CHECK_THROWS_AS(empirical_metrics({}), std::invalid_argument);
  TrialMetrics other = trial(0.0, 0.0);
  other.epsilon = 2.0;
  CHECK_THROWS_AS(empirical_metrics({trial(0, 0), other}),
                  std::invalid_argument);
  TrialMetrics ragged = trial(0.0, 0.0);
  ragged.estimates.pop_back();
  CHECK_THROWS_AS(empirical_metrics({ragged}), std::invalid_argument);
}

TEST_CASE("max-MSE ceiling factor") {
  CHECK(mse_upper_bound(1.0, 100, 100) ==
        doctest::Approx(1.7034127339509355).epsilon(1e-12));
  CHECK(mse_upper_bound(1.0, 100, 1) ==
        doctest::Approx(1.406078321991537).epsilon(1e-12));
  // Scales linearly in the variance and tightens with more trials.
  CHECK(mse_upper_bound(2.5, 100, 100) ==
        doctest::Approx(2.5 * 1.7034127339509355).epsilon(1e-12));
  CHECK(mse_upper_bound(1.0, 10000, 100) < mse_upper_bound(1.0, 100, 100));
  CHECK_THROWS_AS(mse_upper_bound(-1.0, 100, 100), std::invalid_argument);
  CHECK_THROWS_AS(mse_upper_bound(1.0, 0, 100), std::invalid_argument);
  CHECK_THROWS_AS(mse_upper_bound(1.0, 100, 0), std::invalid_argument);
}

TEST_CASE("predicted losses across algorithms") {
  const std::uint64_t d = 1048576, n = 10000;
  const double eps = 2.0;

  TheoryRow he = theory_table(Algorithm::HE, d, eps, n);
  CHECK(he.l1 == doctest::Approx(13768.172875277469).epsilon(1e-12));
  CHECK(he.l2 == doctest::Approx(180.780968020941).epsilon(1e-12));
  CHECK(he.mse == doctest::Approx(0.00017240616609663105).epsilon(1e-12));
  CHECK_FALSE(he.mse_is_lower_bound);
  CHECK_FALSE(he.small_d_flag);

  TheoryRow rhr = theory_table(Algorithm::RHR, d, eps, n);
  CHECK(rhr.l1 == doctest::Approx(7414.552001894653).epsilon(1e-12));
  CHECK(rhr.l2 == doctest::Approx(52.4288).epsilon(1e-12));
  CHECK(rhr.mse == he.mse);
  CHECK(rhr.mse_is_lower_bound);

  TheoryRow olh = theory_table(Algorithm::OLH, d, eps, n);
  CHECK(olh.l1 == doctest::Approx(8922.523272366747).epsilon(1e-12));
  CHECK(olh.l2 == doctest::Approx(75.923368020941).epsilon(1e-12));
  CHECK(olh.mse == he.mse);

  TheoryRow om = theory_table(Algorithm::OcmsMse, d, eps, n);
  TheoryRow ol = theory_table(Algorithm::OcmsL, d, eps, n);
  CHECK(om.l1 == olh.l1);
  CHECK(om.l2 == olh.l2);
  CHECK(om.mse == doctest::Approx(9.206735942077924e-05).epsilon(1e-12));
  CHECK(ol.mse == om.mse);

  TheoryRow ss = theory_table(Algorithm::SS, d, eps, n);
  TheoryRow arp = theory_table(Algorithm::ARappor, d, eps, n);
  CHECK(ss.l1 == olh.l1);
  CHECK(arp.l2 == olh.l2);

  TheoryRow rp = theory_table(Algorithm::Rappor, d, eps, n);
  CHECK(rp.l1 == doctest::Approx(10061.26891707895).epsilon(1e-12));
  CHECK(rp.l2 == doctest::Approx(96.53962347200302).epsilon(1e-12));
  CHECK(rp.mse == om.mse);

  TheoryRow ch = theory_table(Algorithm::CmsHe, d, eps, n);
  CHECK(ch.l1 == he.l1);
  CHECK(ch.mse == he.mse);

  CHECK_THROWS_AS(theory_table(Algorithm::OriginalCms, d, eps, n),
                  std::invalid_argument);
  CHECK_THROWS_AS(theory_table(Algorithm::HE, 1, eps, n),
                  std::invalid_argument);
  CHECK_THROWS_AS(theory_table(Algorithm::HE, d, 0.0, n),
                  std::invalid_argument);
  CHECK_THROWS_AS(theory_table(Algorithm::HE, d, eps, 0),
                  std::invalid_argument);

  // Small dictionaries trip the looseness warning: 10 e^2 ~ 73.9.
  CHECK(theory_table(Algorithm::HE, 73, eps, n).small_d_flag);
  CHECK_FALSE(theory_table(Algorithm::HE, 74, eps, n).small_d_flag);
}

TEST_CASE("per-report communication costs") {
  const std::uint64_t d = 1048576;
  const double eps = 2.0;
  CHECK(comm_cost(Algorithm::HE, d, eps) == doctest::Approx(20.0));
  CHECK(comm_cost(Algorithm::RHR, d, eps) == doctest::Approx(22.0));
  CHECK(comm_cost(Algorithm::OLH, d, eps) == doctest::Approx(2097152.0));
  CHECK(comm_cost(Algorithm::OcmsMse, d, eps) == doctest::Approx(41.0));
  CHECK(comm_cost(Algorithm::OcmsL, d, eps) == doctest::Approx(42.0));
  CHECK(comm_cost(Algorithm::SS, d, eps) ==
        doctest::Approx(124993.32316226393).epsilon(1e-12));
  CHECK(comm_cost(Algorithm::Rappor, d, eps) == doctest::Approx(1048576.0));
  CHECK(comm_cost(Algorithm::OriginalCms, d, eps, 4) ==
        doctest::Approx(2.0 * 1048576.0));
  // The constant floor takes over at tiny dictionaries.
  CHECK(comm_cost(Algorithm::OcmsMse, 2, 20.0) == doctest::Approx(36.0));
  CHECK_THROWS_AS(comm_cost(Algorithm::CmsHe, d, eps),
                  std::invalid_argument);
  CHECK_THROWS_AS(comm_cost(Algorithm::ARappor, d, eps),
                  std::invalid_argument);
  CHECK_THROWS_AS(comm_cost(Algorithm::OriginalCms, d, eps, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(comm_cost(Algorithm::HE, 1, eps), std::invalid_argument);
}

TEST_CASE("report audit: description length vs wire size") {
  EstimatorParams p = make_params(2.0, 1000000, RangeMode::MseOpt);
  REQUIRE(p.m == 4);
  ReportAudit audit = audit_report_bits(p);
  // 2 x 20 bits of hash coefficients plus 2 bits of bucket index.
  CHECK(audit.info_bits == doctest::Approx(42.0));
  CHECK(audit.packed_bits == 160);
  // The fixed wire layout is far wider than the information it carries,
  // and the information stays within the predicted per-report budget
  // (rounded coefficients cost at most 2 extra bits here).
  CHECK(audit.info_bits <= comm_cost(Algorithm::OcmsMse, 1000000, 2.0) + 2.0);
  CHECK(double(audit.packed_bits) > audit.info_bits);
}

}  // TEST_SUITE("analysis")
