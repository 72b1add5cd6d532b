#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "ocms/datasets.hpp"

using namespace ocms;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content) {
    path = std::string("/tmp/ocms_ds_") + name;
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("datasets") {

TEST_CASE("power-law generator: range, name, determinism, skew") {
  Dataset ds = gen_zipf(1000, 5000, false, 7);
  CHECK(ds.d == 1000);
  CHECK(ds.name == "zipf");
  CHECK(ds.values.size() == 5000);
  for (std::uint64_t v : ds.values) CHECK(v < 1000);

  Dataset again = gen_zipf(1000, 5000, false, 7);
  CHECK(ds.values == again.values);
  Dataset other = gen_zipf(1000, 5000, false, 8);
  CHECK(ds.values != other.values);

  // Rank 0 carries 1/zeta(2) of the mass; with 5000 draws the observed
  // share cannot stray far from 0.6.
  std::vector<double> f = frequencies(ds);
  CHECK(f[0] > 0.55);
  CHECK(f[0] < 0.67);
  CHECK(std::accumulate(f.begin(), f.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("power-law generator: aligned variant lands on multiples of 16") {
  Dataset ds = gen_zipf(1600, 3000, true, 3);
  CHECK(ds.name == "zipf_mod16");
  CHECK(ds.d == 1600);
  for (std::uint64_t v : ds.values) {
    CHECK(v % 16 == 0);
    CHECK(v < 1600);
  }
  // Fewer than 16 slots leaves no rank to place.
  CHECK_THROWS_AS(gen_zipf(15, 100, true, 1), std::invalid_argument);
  CHECK_NOTHROW(gen_zipf(16, 100, true, 1));
}

TEST_CASE("rounded-normal generator: domain and concentration") {
  Dataset ds = gen_gaussian(4000, 99);
  CHECK(ds.d == 10001);
  CHECK(ds.name == "gaussian");
  CHECK(ds.values.size() == 4000);
  double mean = 0.0;
  for (std::uint64_t v : ds.values) {
    CHECK(v <= 10000);
    mean += double(v);
  }
  mean /= 4000.0;
  // The seed-chosen center lies in [1000, 9000]; the sample mean of 4000
  // draws at sigma = 50 sits within a few units of it.
  CHECK(mean > 990.0);
  CHECK(mean < 9010.0);
  double var = 0.0;
  for (std::uint64_t v : ds.values) var += (double(v) - mean) * (double(v) - mean);
  var /= 4000.0;
  CHECK(std::sqrt(var) == doctest::Approx(50.0).epsilon(0.1));

  CHECK(gen_gaussian(100, 5).values == gen_gaussian(100, 5).values);
  CHECK_THROWS_AS(gen_gaussian(100, 5, 0.0), std::invalid_argument);
}

TEST_CASE("id-file ingestion remaps densely in sorted order") {
  TempFile f("remap.txt", "5\n99\n5\n7\n");
  Dataset ds = ingest_kosarak(f.path, 1.0, 1);
  CHECK(ds.d == 3);
  CHECK(ds.name == "kosarak");
  CHECK(ds.values == std::vector<std::uint64_t>{0, 2, 0, 1});
}

TEST_CASE("id-file ingestion: blank lines, sampling, and errors") {
  TempFile f("blanks.txt", "1\n\n2\n  \n3\n2\n4\n");
  Dataset full = ingest_kosarak(f.path, 1.0, 1);
  CHECK(full.d == 4);
  CHECK(full.values.size() == 5);

  // Subsampling shrinks n but never d.
  TempFile big("big.txt", [] {
    std::string s;
    for (int i = 0; i < 2000; ++i) s += std::to_string(i % 50) + "\n";
    return s;
  }());
  Dataset part = ingest_kosarak(big.path, 0.25, 42);
  CHECK(part.d == 50);
  CHECK(part.values.size() > 300);
  CHECK(part.values.size() < 700);
  Dataset same = ingest_kosarak(big.path, 0.25, 42);
  CHECK(part.values == same.values);

  TempFile bad("bad.txt", "1\n2\nxyz\n");
  try {
    ingest_kosarak(bad.path, 1.0, 1);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  TempFile empty("empty.txt", "\n\n");
  CHECK_THROWS_AS(ingest_kosarak(empty.path, 1.0, 1), std::runtime_error);
  CHECK_THROWS_AS(ingest_kosarak(f.path, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(ingest_kosarak("/nonexistent/nope", 1.0, 1),
                  std::runtime_error);
}

TEST_CASE("empirical frequencies") {
  Dataset ds;
  ds.d = 4;
  ds.values = {0, 0, 1, 3};
  std::vector<double> f = frequencies(ds);
  CHECK(f == std::vector<double>{0.5, 0.25, 0.0, 0.25});
  ds.values.push_back(4);
  CHECK_THROWS_AS(frequencies(ds), std::invalid_argument);
}

TEST_CASE("dataset files round-trip") {
  Dataset ds = gen_zipf(200, 300, false, 11);
  std::string path = "/tmp/ocms_ds_roundtrip.txt";
  write_dataset(ds, path);
  Dataset back = read_dataset(path);
  CHECK(back.d == ds.d);
  CHECK(back.name == ds.name);
  CHECK(back.values == ds.values);
  std::remove(path.c_str());

  TempFile bad_header("hdr.txt", "n=3 d=2 name=x\n0\n1\n0\n");
  CHECK_THROWS_AS(read_dataset(bad_header.path), std::runtime_error);
  TempFile short_body("short.txt", "d=2 n=3 name=x\n0\n1\n");
  CHECK_THROWS_AS(read_dataset(short_body.path), std::runtime_error);
  TempFile big_value("bigval.txt", "d=2 n=1 name=x\n5\n");
  CHECK_THROWS_AS(read_dataset(big_value.path), std::runtime_error);
  TempFile no_name("noname.txt", "d=2 n=0 name=\n");
  CHECK_THROWS_AS(read_dataset(no_name.path), std::runtime_error);
  CHECK_THROWS_AS(read_dataset("/nonexistent/nope"), std::runtime_error);
}

}  // TEST_SUITE("datasets")
