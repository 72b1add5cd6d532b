#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "ocms/baselines.hpp"
#include "ocms/cms.hpp"
#include "ocms/field.hpp"
#include "ocms/hashing.hpp"
#include "ocms/ldp.hpp"
#include "ocms/rng.hpp"

using namespace ocms;

TEST_SUITE("baselines") {

TEST_CASE("hadamard entries, symmetry, and exponent") {
  const int want[4][4] = {
      {1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
  for (std::uint64_t r = 0; r < 4; ++r)
    for (std::uint64_t c = 0; c < 4; ++c) {
      CHECK(hadamard_entry(r, c) == want[r][c]);
      CHECK(hadamard_entry(r, c) == hadamard_entry(c, r));
    }
  CHECK(hadamard_entry(5, 3) == -1);  // popcount(5 & 3) = 1

  CHECK(hadamard_exponent(1) == 0);
  CHECK(hadamard_exponent(2) == 1);
  CHECK(hadamard_exponent(3) == 2);
  CHECK(hadamard_exponent(1025) == 11);
  CHECK_THROWS_AS(hadamard_exponent(0), std::invalid_argument);
}

TEST_CASE("hadamard encoding is exactly unbiased") {
  // d = 2 uses a 4-point transform; enumerate every (j, flip) outcome.
  const double eps = std::log(3.0);
  const double keep = 3.0 / 4.0;
  for (std::uint64_t x0 = 0; x0 < 2; ++x0) {
    for (std::uint64_t x = 0; x < 2; ++x) {
      double expect = 0.0;
      for (std::uint64_t j = 0; j < 4; ++j) {
        int w = hadamard_entry(x0 + 1, j);
        for (int flip = 0; flip < 2; ++flip) {
          double prob = (flip ? 1.0 - keep : keep) / 4.0;
          HeReport rep{j, std::int8_t(flip ? -w : w)};
          expect += prob * he_estimate({x}, 2, eps, {rep})[0];
        }
      }
      CHECK(expect == doctest::Approx(x == x0 ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("hadamard pipeline recovers a point mass") {
  const double eps = 2.0;
  const std::uint64_t d = 30, n = 6000;
  std::vector<HeReport> reports;
  reports.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng rng = stream_rng(11, 0, 0, i);
    HeReport rep = he_encode(7, d, eps, rng);
    CHECK((rep.z == 1 || rep.z == -1));
    CHECK(rep.j < 32);  // 2^L with 2^L >= d+1 = 31
    reports.push_back(rep);
  }
  std::vector<double> est = he_estimate({7, 8}, d, eps, reports);
  CHECK(est[0] == doctest::Approx(1.0).epsilon(0.15));
  CHECK(std::abs(est[1]) < 0.15);

  Rng rng(1);
  CHECK_THROWS_AS(he_encode(30, d, eps, rng), std::invalid_argument);
  CHECK_THROWS_AS(he_estimate({0}, d, eps, {}), std::invalid_argument);
  CHECK_THROWS_AS(he_estimate({d}, d, eps, reports), std::invalid_argument);
  CHECK_THROWS_AS(he_estimate({0}, d, eps, {HeReport{0, 2}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(he_estimate({0}, d, eps, {HeReport{32, 1}}),
                  std::invalid_argument);
}

TEST_CASE("recursive-hashing parameters track the privacy level") {
  RhrParams p = rhr_params(2.4, 10000);
  CHECK(p.b == 2);
  CHECK(p.B == 2);
  CHECK(p.L == 13);  // 2^13 >= 10000/2 + 2
  CHECK(rhr_params(0.3, 100).b == 1);
  CHECK(rhr_params(4.6, 100).b == 5);
  CHECK(rhr_params(4.6, 100).B == 16);
  CHECK_THROWS_AS(rhr_params(35.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(rhr_params_forced(1.0, 100, 0), std::invalid_argument);
  CHECK_THROWS_AS(rhr_params_forced(1.0, 100, 33), std::invalid_argument);
  CHECK_THROWS_AS(rhr_params(1.0, 1), std::invalid_argument);
}

TEST_CASE("one-bit recursive hashing matches the hadamard estimator") {
  // At b = 1 the symbol is just the hadamard sign, so each report decodes
  // to the same value under both estimators.
  const double eps = 1.2;
  const std::uint64_t d = 2;
  RhrParams p = rhr_params(eps, d);
  REQUIRE(p.b == 1);
  REQUIRE(p.L == hadamard_exponent(d + 1));
  for (std::uint64_t j = 0; j < 4; ++j) {
    for (int z : {1, -1}) {
      HeReport he{j, std::int8_t(z)};
      RhrReport rh{j, std::uint32_t(z == -1 ? 1 : 0)};
      for (std::uint64_t x = 0; x < d; ++x) {
        double via_he = he_estimate({x}, d, eps, {he})[0];
        double via_rhr = rhr_estimate({x}, p, {rh})[0];
        CHECK(via_he == doctest::Approx(via_rhr).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("recursive hashing is exactly unbiased") {
  // d = 4 with a forced two-bit alphabet: quotient rows in a 4-point
  // transform, four symbols; enumerate all (j, z) outcomes.
  const double eps = std::log(3.0);
  RhrParams p = rhr_params_forced(eps, 4, 2);
  REQUIRE(p.B == 2);
  REQUIRE(p.L == 2);
  const double a = 3.0;
  const double p_keep = a / (a + 3.0);
  const double p_other = 1.0 / (a + 3.0);
  for (std::uint64_t x0 = 0; x0 < 4; ++x0) {
    std::uint64_t quot = x0 / 2, rho = x0 % 2;
    for (std::uint64_t x = 0; x < 4; ++x) {
      double expect = 0.0;
      for (std::uint64_t j = 0; j < 4; ++j) {
        int sigma = hadamard_entry(quot + 1, j);
        std::uint64_t sym = (sigma == -1 ? 2 : 0) + rho;
        for (std::uint32_t z = 0; z < 4; ++z) {
          double prob = (z == sym ? p_keep : p_other) / 4.0;
          expect += prob * rhr_estimate({x}, p, {RhrReport{j, z}})[0];
        }
      }
      CHECK(expect == doctest::Approx(x == x0 ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("recursive hashing recovers a point mass") {
  const double eps = 3.0;
  const std::uint64_t d = 40, n = 8000;
  RhrParams p = rhr_params(eps, d);
  std::vector<RhrReport> reports;
  reports.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng rng = stream_rng(17, 0, 0, i);
    RhrReport rep = rhr_encode(13, p, rng);
    CHECK(rep.z < 2 * p.B);
    reports.push_back(rep);
  }
  std::vector<double> est = rhr_estimate({13, 22}, p, reports);
  CHECK(est[0] == doctest::Approx(1.0).epsilon(0.2));
  CHECK(std::abs(est[1]) < 0.2);

  Rng rng(1);
  CHECK_THROWS_AS(rhr_encode(40, p, rng), std::invalid_argument);
  CHECK_THROWS_AS(rhr_estimate({0}, p, {}), std::invalid_argument);
  CHECK_THROWS_AS(
      rhr_estimate({0}, p, {RhrReport{0, std::uint32_t(2 * p.B)}}),
      std::invalid_argument);
}

TEST_CASE("classic local hashing resolves its fixed range") {
  EstimatorParams p = olh_params(2.0, 1000);
  CHECK(p.m == 8);  // round(1 + e^2)
  CHECK(p.mode == RangeMode::FixedM);
  CHECK_FALSE(p.clip);
  CHECK(olh_params(std::log(3.0), 1000).m == 4);
  CHECK_THROWS_AS(olh_params(23.0, 1000), std::invalid_argument);
}

TEST_CASE("equivalent range of chained stages") {
  CHECK(recursive_equivalent_m(4.0, 2.0) == doctest::Approx(1.6));
  CHECK(recursive_equivalent_m(25.0 / 13.0, 2.0) ==
        doctest::Approx(25.0 / 19.0).epsilon(1e-12));
  // Chaining with an infinite-range stage is the identity in the limit:
  // m1 * m2 / (m1 + m2 - 1) -> m2 as m1 grows.
  CHECK(recursive_equivalent_m(1e12, 8.0) == doctest::Approx(8.0).epsilon(1e-9));
  CHECK_THROWS_AS(recursive_equivalent_m(1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(recursive_equivalent_m(4.0, 0.5), std::invalid_argument);
}

TEST_CASE("two-stage sketch is exactly unbiased") {
  // Field of size 5, first-stage range 2, 4-point transform on the bucket:
  // enumerate 25 hash draws x 4 coefficients x both flips.
  CmsHeParams p;
  p.epsilon = std::log(3.0);
  p.d = 3;
  p.m1 = 2;
  p.field = prime_field(5);
  p.stats = api_stats(p.field, 2);
  const double keep = 3.0 / 4.0;
  for (std::uint64_t x0 = 0; x0 < 3; ++x0) {
    for (std::uint64_t x = 0; x < 3; ++x) {
      double expect = 0.0;
      for (std::uint64_t a0 = 0; a0 < 5; ++a0)
        for (std::uint64_t a1 = 0; a1 < 5; ++a1) {
          std::uint64_t bucket =
              ff_add(p.field, a0, ff_mul(p.field, a1, x0)) % 2;
          for (std::uint64_t j = 0; j < 4; ++j) {
            int w = hadamard_entry(bucket + 1, j);
            for (int flip = 0; flip < 2; ++flip) {
              double prob = (flip ? 1.0 - keep : keep) / (25.0 * 4.0);
              CmsHeReport rep{a0, a1, j, std::int8_t(flip ? -w : w)};
              expect += prob * cms_he_estimate({x}, p, {rep})[0];
            }
          }
        }
      CHECK(expect == doctest::Approx(x == x0 ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("two-stage sketch recovers a point mass") {
  CmsHeParams p = cms_he_params(3.0, 50, 16);
  CHECK(p.field.kind == FieldKind::Prime);
  CHECK(p.stats.m_prime == doctest::Approx(16.0).epsilon(1e-6));
  const std::uint64_t n = 6000;
  std::vector<CmsHeReport> reports;
  reports.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Rng rng = stream_rng(23, 0, 0, i);
    CmsHeReport rep = cms_he_encode(7, p, rng);
    CHECK((rep.z == 1 || rep.z == -1));
    CHECK(rep.j < 32);  // 2^L >= m1 + 1 = 17
    reports.push_back(rep);
  }
  std::vector<double> est = cms_he_estimate({7, 11}, p, reports);
  CHECK(est[0] == doctest::Approx(1.0).epsilon(0.15));
  CHECK(std::abs(est[1]) < 0.15);

  Rng rng(1);
  CHECK_THROWS_AS(cms_he_encode(50, p, rng), std::invalid_argument);
  CHECK_THROWS_AS(cms_he_estimate({0}, p, {}), std::invalid_argument);
  CHECK_THROWS_AS(cms_he_estimate({0}, p, {CmsHeReport{0, 0, 0, 3}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(cms_he_params(1.0, 1, 16), std::invalid_argument);
  CHECK_THROWS_AS(cms_he_params(1.0, 50, 1), std::invalid_argument);
}

}  // TEST_SUITE("baselines")
