#include "ocms/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "ocms/rng.hpp"

namespace ocms {
namespace {

std::uint64_t parse_u64(const std::string& text, const char* what,
                        std::size_t line_no) {
  std::uint64_t v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw std::runtime_error(std::string(what) + ": bad integer at line " +
                             std::to_string(line_no) + ": '" + text + "'");
  return v;
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

Dataset gen_zipf(std::uint64_t d, std::uint64_t n, bool mod_aligned,
                 std::uint64_t seed) {
  std::uint64_t ranks = mod_aligned ? d / 16 : d;
  if (ranks == 0)
    throw std::invalid_argument("gen_zipf: no ranks fit the dictionary");
  std::vector<double> cdf(ranks);
  double total = 0.0;
  for (std::uint64_t r = 1; r <= ranks; ++r) {
    total += 1.0 / (double(r) * double(r));
    cdf[r - 1] = total;
  }
  for (double& c : cdf) c /= total;
  Dataset ds;
  ds.d = d;
  ds.name = mod_aligned ? "zipf_mod16" : "zipf";
  ds.values.reserve(n);
  Rng rng(seed);
  for (std::uint64_t i = 0; i < n; ++i) {
    double u = rng.next_double();
    std::uint64_t rank =
        std::uint64_t(std::upper_bound(cdf.begin(), cdf.end(), u) -
                      cdf.begin());
    if (rank >= ranks) rank = ranks - 1;
    ds.values.push_back(mod_aligned ? 16 * rank : rank);
  }
  return ds;
}

Dataset gen_gaussian(std::uint64_t n, std::uint64_t seed, double sigma) {
  if (!(sigma > 0.0))
    throw std::invalid_argument("gen_gaussian: sigma must be > 0");
  Dataset ds;
  ds.d = 10001;
  ds.name = "gaussian";
  ds.values.reserve(n);
  Rng rng(seed);
  double mu = 1000.0 + double(rng.next_below(8001));
  for (std::uint64_t i = 0; i < n; ++i) {
    double v = std::round(rng.next_normal(mu, sigma));
    if (v < 0.0) v = 0.0;
    if (v > 10000.0) v = 10000.0;
    ds.values.push_back(std::uint64_t(v));
  }
  return ds;
}

Dataset ingest_kosarak(const std::string& path, double rate,
                       std::uint64_t seed) {
  if (!(rate > 0.0) || !(rate <= 1.0))
    throw std::invalid_argument("ingest_kosarak: rate must be in (0, 1]");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("ingest_kosarak: cannot open " + path);
  std::vector<std::uint64_t> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    std::size_t a = line.find_first_not_of(" \t\r");
    std::size_t b = line.find_last_not_of(" \t\r");
    raw.push_back(
        parse_u64(line.substr(a, b - a + 1), "ingest_kosarak", line_no));
  }
  if (raw.empty())
    throw std::runtime_error("ingest_kosarak: no entries in " + path);
  // Dense remap over the whole file so d is sampling-independent.
  std::vector<std::uint64_t> ids = raw;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::unordered_map<std::uint64_t, std::uint64_t> remap;
  remap.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) remap[ids[i]] = i;
  Dataset ds;
  ds.d = ids.size();
  ds.name = "kosarak";
  Rng rng(seed);
  for (std::uint64_t v : raw) {
    if (rate < 1.0 && !rng.next_bernoulli(rate)) continue;
    ds.values.push_back(remap[v]);
  }
  if (ds.values.empty())
    throw std::runtime_error("ingest_kosarak: sampling kept no entries");
  return ds;
}

std::vector<double> frequencies(const Dataset& ds) {
  std::vector<std::uint64_t> counts(ds.d, 0);
  for (std::uint64_t v : ds.values) {
    if (v >= ds.d)
      throw std::invalid_argument("frequencies: value outside dictionary");
    ++counts[v];
  }
  std::vector<double> freq(ds.d, 0.0);
  if (ds.values.empty()) return freq;
  double n = double(ds.values.size());
  for (std::uint64_t i = 0; i < ds.d; ++i) freq[i] = double(counts[i]) / n;
  return freq;
}

void write_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_dataset: cannot open " + path);
  out << "d=" << ds.d << " n=" << ds.values.size() << " name=" << ds.name
      << "\n";
  for (std::uint64_t v : ds.values) out << v << "\n";
  if (!out) throw std::runtime_error("write_dataset: write failed: " + path);
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_dataset: cannot open " + path);
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("read_dataset: empty file: " + path);
  Dataset ds;
  std::uint64_t n = 0;
  {
    std::size_t dp = header.find("d=");
    std::size_t np = header.find(" n=");
    std::size_t mp = header.find(" name=");
    if (dp != 0 || np == std::string::npos || mp == std::string::npos ||
        np < dp || mp < np)
      throw std::runtime_error("read_dataset: bad header: '" + header + "'");
    ds.d = parse_u64(header.substr(2, np - 2), "read_dataset header d", 1);
    n = parse_u64(header.substr(np + 3, mp - np - 3), "read_dataset header n",
                  1);
    ds.name = header.substr(mp + 6);
    while (!ds.name.empty() &&
           (ds.name.back() == '\r' || ds.name.back() == ' '))
      ds.name.pop_back();
    if (ds.name.empty())
      throw std::runtime_error("read_dataset: empty dataset name");
  }
  ds.values.reserve(n);
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    std::size_t a = line.find_first_not_of(" \t\r");
    std::size_t b = line.find_last_not_of(" \t\r");
    std::uint64_t v =
        parse_u64(line.substr(a, b - a + 1), "read_dataset", line_no);
    if (v >= ds.d)
      throw std::runtime_error("read_dataset: value outside dictionary at line " +
                               std::to_string(line_no));
    ds.values.push_back(v);
  }
  if (ds.values.size() != n)
    throw std::runtime_error("read_dataset: header promised " +
                             std::to_string(n) + " values, found " +
                             std::to_string(ds.values.size()));
  return ds;
}

}  // namespace ocms
