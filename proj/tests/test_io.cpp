#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "ocms/io.hpp"

using namespace ocms;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempPath {
  std::string path;
  explicit TempPath(const std::string& name)
      : path(std::string("/tmp/ocms_io_") + name) {}
  ~TempPath() { std::remove(path.c_str()); }
};

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("shortest round-trip decimal formatting") {
  for (double v : {0.1, 1.0 / 3.0, 9.206735942077924e-05, -0.0, 1e300,
                   123456789.25, 2.0}) {
    std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("sketch reports round-trip through CSV") {
  std::vector<Report> reports = {
      {0, 0, 0},
      {4294967295u, 0xffffffffffffffc4ull, 1},
      {7, 123456789, 987654321},
  };
  TempPath f("reports.csv");
  write_reports_csv(reports, f.path);
  CHECK(slurp(f.path).substr(0, 9) == "z,a0,a1\n0");
  std::vector<Report> back = read_reports_csv(f.path);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].z == reports[i].z);
    CHECK(back[i].a0 == reports[i].a0);
    CHECK(back[i].a1 == reports[i].a1);
  }

  TempPath bad_header("rep_hdr.csv");
  spit(bad_header.path, "z,a0\n1,2\n");
  CHECK_THROWS_AS(read_reports_csv(bad_header.path), std::runtime_error);
  TempPath big_z("rep_bigz.csv");
  spit(big_z.path, "z,a0,a1\n4294967296,0,0\n");
  CHECK_THROWS_AS(read_reports_csv(big_z.path), std::runtime_error);
  TempPath ragged("rep_ragged.csv");
  spit(ragged.path, "z,a0,a1\n1,2\n");
  CHECK_THROWS_AS(read_reports_csv(ragged.path), std::runtime_error);
  CHECK_THROWS_AS(read_reports_csv("/nonexistent/nope"), std::runtime_error);
}

TEST_CASE("sketch reports round-trip through the packed layout") {
  std::vector<Report> reports = {
      {1, 2, 3},
      {4294967295u, 0xffffffffffffffffull, 0x0123456789abcdefull},
  };
  TempPath f("reports.bin");
  write_reports_packed(reports, f.path);
  std::string bytes = slurp(f.path);
  REQUIRE(bytes.size() == 40);
  // Little-endian u32 z = 1 leads the first record.
  CHECK(std::uint8_t(bytes[0]) == 1);
  CHECK(std::uint8_t(bytes[1]) == 0);
  // The second record's a0 is all ones.
  for (int i = 24; i < 32; ++i) CHECK(std::uint8_t(bytes[i]) == 0xff);

  std::vector<Report> back = read_reports_packed(f.path);
  REQUIRE(back.size() == 2);
  CHECK(back[1].z == reports[1].z);
  CHECK(back[1].a0 == reports[1].a0);
  CHECK(back[1].a1 == reports[1].a1);

  TempPath torn("reports_torn.bin");
  spit(torn.path, bytes.substr(0, 30));  // not a multiple of 20
  CHECK_THROWS_AS(read_reports_packed(torn.path), std::runtime_error);
}

TEST_CASE("baseline reports share one CSV schema") {
  std::vector<HeReport> he = {{0, 1}, {31, -1}};
  TempPath fh("he.csv");
  write_he_csv(he, fh.path);
  CHECK(slurp(fh.path) == "alg,j,z,a0,a1\nHE,0,1,0,0\nHE,31,-1,0,0\n");
  std::vector<HeReport> he_back = read_he_csv(fh.path);
  REQUIRE(he_back.size() == 2);
  CHECK(he_back[1].j == 31);
  CHECK(he_back[1].z == -1);

  std::vector<RhrReport> rhr = {{5, 3}};
  TempPath fr("rhr.csv");
  write_rhr_csv(rhr, fr.path);
  CHECK(slurp(fr.path) == "alg,j,z,a0,a1\nRHR,5,3,0,0\n");
  std::vector<RhrReport> rhr_back = read_rhr_csv(fr.path);
  REQUIRE(rhr_back.size() == 1);
  CHECK(rhr_back[0].j == 5);
  CHECK(rhr_back[0].z == 3);

  std::vector<CmsHeReport> ch = {{11, 22, 3, -1}};
  TempPath fc("cmshe.csv");
  write_cms_he_csv(ch, fc.path);
  CHECK(slurp(fc.path) == "alg,j,z,a0,a1\nCMSHE,3,-1,11,22\n");
  std::vector<CmsHeReport> ch_back = read_cms_he_csv(fc.path);
  REQUIRE(ch_back.size() == 1);
  CHECK(ch_back[0].a0 == 11);
  CHECK(ch_back[0].a1 == 22);
  CHECK(ch_back[0].j == 3);
  CHECK(ch_back[0].z == -1);

  // Each reader rejects rows tagged for a different algorithm.
  CHECK_THROWS_AS(read_rhr_csv(fh.path), std::runtime_error);
  CHECK_THROWS_AS(read_he_csv(fc.path), std::runtime_error);
  // The sign column must be +1/-1 for the hadamard-style reports.
  TempPath bad_sign("he_sign.csv");
  spit(bad_sign.path, "alg,j,z,a0,a1\nHE,0,2,0,0\n");
  CHECK_THROWS_AS(read_he_csv(bad_sign.path), std::runtime_error);
  // The symbol column is bounded to 32 bits.
  TempPath big_sym("rhr_sym.csv");
  spit(big_sym.path, "alg,j,z,a0,a1\nRHR,0,4294967296,0,0\n");
  CHECK_THROWS_AS(read_rhr_csv(big_sym.path), std::runtime_error);
}

TEST_CASE("trial rows group back into per-trial records") {
  TrialMetrics t1{"OCMS_MSE", 1.0, 0, {3, 9}, {0.52, 0.11}, {0.5, 0.1}};
  TrialMetrics t2{"OCMS_MSE", 1.0, 1, {3, 9}, {0.47, 0.08}, {0.5, 0.1}};
  TrialMetrics t3{"HE", 2.0, 0, {3, 9}, {0.55, 0.12}, {0.5, 0.1}};
  TempPath f("trials.csv");
  write_trials_csv({t1, t2, t3}, f.path);
  std::string text = slurp(f.path);
  CHECK(text.substr(0, text.find('\n')) ==
        "algorithm,epsilon,trial,x,estimate,truth");
  CHECK(text.find("OCMS_MSE,1,0,3,0.52,0.5\n") != std::string::npos);

  std::vector<TrialMetrics> back = read_trials_csv(f.path);
  REQUIRE(back.size() == 3);
  CHECK(back[0].algorithm == "OCMS_MSE");
  CHECK(back[0].trial == 0);
  CHECK(back[0].x_set == std::vector<std::uint64_t>{3, 9});
  CHECK(back[0].estimates == std::vector<double>{0.52, 0.11});
  CHECK(back[0].truth == std::vector<double>{0.5, 0.1});
  CHECK(back[1].trial == 1);
  CHECK(back[2].algorithm == "HE");
  CHECK(back[2].epsilon == 2.0);

  TrialMetrics ragged = t1;
  ragged.estimates.pop_back();
  CHECK_THROWS_AS(write_trials_csv({ragged}, f.path), std::invalid_argument);
  TempPath bad("trials_bad.csv");
  spit(bad.path, "algorithm,epsilon,trial,x,estimate,truth\nA,1,0,3,x,0.5\n");
  CHECK_THROWS_AS(read_trials_csv(bad.path), std::runtime_error);
}

TEST_CASE("summary CSV layout") {
  LossSummary row;
  row.algorithm = "OCMS_L";
  row.epsilon = 2.0;
  row.empirical = {0.001, 0.5, 0.01};
  row.theory_mse = 0.0009;
  row.theory_l1_upper = 0.6;
  row.theory_l2 = 0.011;
  row.mse_upper_bound = 0.002;
  TempPath f("summary.csv");
  write_summary_csv({row}, f.path);
  CHECK(slurp(f.path) ==
        "algorithm,epsilon,worst_mse,l1,l2,theory_mse,theory_l1_upper,"
        "theory_l2,mse_upper_bound\n"
        "OCMS_L,2,0.001,0.5,0.01,9e-04,0.6,0.011,0.002\n");
}

}  // TEST_SUITE("io")
