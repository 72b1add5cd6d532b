#include "ocms/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>
#include <tuple>

namespace ocms {
namespace {

std::string read_text(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(std::string(what) + ": cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return text;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  for (;;) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

std::uint64_t parse_u64(const std::string& s, const char* what,
                        std::size_t line_no) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error(std::string(what) + ": bad integer at line " +
                             std::to_string(line_no) + ": '" + s + "'");
  return v;
}

std::int64_t parse_i64(const std::string& s, const char* what,
                       std::size_t line_no) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error(std::string(what) + ": bad integer at line " +
                             std::to_string(line_no) + ": '" + s + "'");
  return v;
}

double parse_double(const std::string& s, const char* what,
                    std::size_t line_no) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error(std::string(what) + ": bad number at line " +
                             std::to_string(line_no) + ": '" + s + "'");
  return v;
}

void expect_header(const std::vector<std::string>& lines, const char* header,
                   const char* what) {
  if (lines.empty() || lines.front() != header)
    throw std::runtime_error(std::string(what) + ": expected header '" +
                             header + "'");
}

void expect_fields(const std::vector<std::string>& fields, std::size_t count,
                   const char* what, std::size_t line_no) {
  if (fields.size() != count)
    throw std::runtime_error(std::string(what) + ": expected " +
                             std::to_string(count) + " fields at line " +
                             std::to_string(line_no));
}

std::ofstream open_out(const std::string& path, const char* what,
                       bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out)
    throw std::runtime_error(std::string(what) + ": cannot open " + path);
  return out;
}

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= std::uint32_t(std::uint8_t(p[i])) << (8 * i);
  return v;
}

std::uint64_t get_u64(const char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= std::uint64_t(std::uint8_t(p[i])) << (8 * i);
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc())
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

void write_reports_csv(const std::vector<Report>& reports,
                       const std::string& path) {
  std::ofstream out = open_out(path, "write_reports_csv");
  out << "z,a0,a1\n";
  for (const Report& r : reports)
    out << r.z << ',' << r.a0 << ',' << r.a1 << '\n';
  if (!out)
    throw std::runtime_error("write_reports_csv: write failed: " + path);
}

std::vector<Report> read_reports_csv(const std::string& path) {
  auto lines = split_lines(read_text(path, "read_reports_csv"));
  expect_header(lines, "z,a0,a1", "read_reports_csv");
  std::vector<Report> out;
  out.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto f = split_fields(lines[i]);
    expect_fields(f, 3, "read_reports_csv", i + 1);
    std::uint64_t z = parse_u64(f[0], "read_reports_csv", i + 1);
    if (z > 0xFFFFFFFFull)
      throw std::runtime_error("read_reports_csv: z exceeds 32 bits at line " +
                               std::to_string(i + 1));
    out.push_back(Report{std::uint32_t(z),
                         parse_u64(f[1], "read_reports_csv", i + 1),
                         parse_u64(f[2], "read_reports_csv", i + 1)});
  }
  return out;
}

void write_reports_packed(const std::vector<Report>& reports,
                          const std::string& path) {
  std::string buf;
  buf.reserve(reports.size() * 20);
  for (const Report& r : reports) {
    put_u32(buf, r.z);
    put_u64(buf, r.a0);
    put_u64(buf, r.a1);
  }
  std::ofstream out = open_out(path, "write_reports_packed", true);
  out.write(buf.data(), std::streamsize(buf.size()));
  if (!out)
    throw std::runtime_error("write_reports_packed: write failed: " + path);
}

std::vector<Report> read_reports_packed(const std::string& path) {
  std::string buf = read_text(path, "read_reports_packed");
  if (buf.size() % 20 != 0)
    throw std::runtime_error(
        "read_reports_packed: size is not a whole number of 20-byte records");
  std::vector<Report> out;
  out.reserve(buf.size() / 20);
  for (std::size_t off = 0; off < buf.size(); off += 20) {
    const char* p = buf.data() + off;
    out.push_back(Report{get_u32(p), get_u64(p + 4), get_u64(p + 12)});
  }
  return out;
}

namespace {

constexpr const char* kBaselineHeader = "alg,j,z,a0,a1";

template <typename Row>
void write_baseline(const std::vector<Row>& rows, const std::string& path,
                    const char* alg, const char* what,
                    void (*emit)(std::ofstream&, const Row&)) {
  std::ofstream out = open_out(path, what);
  out << kBaselineHeader << '\n';
  for (const Row& r : rows) {
    out << alg << ',';
    emit(out, r);
  }
  if (!out)
    throw std::runtime_error(std::string(what) + ": write failed: " + path);
}

std::vector<std::vector<std::string>> read_baseline(const std::string& path,
                                                    const char* alg,
                                                    const char* what) {
  auto lines = split_lines(read_text(path, what));
  expect_header(lines, kBaselineHeader, what);
  std::vector<std::vector<std::string>> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto f = split_fields(lines[i]);
    expect_fields(f, 5, what, i + 1);
    if (f[0] != alg)
      throw std::runtime_error(std::string(what) + ": expected alg '" + alg +
                               "' at line " + std::to_string(i + 1));
    f.push_back(std::to_string(i + 1));  // carry the line number for errors
    rows.push_back(std::move(f));
  }
  return rows;
}

std::int8_t parse_sign(const std::string& s, const char* what,
                       std::size_t line_no) {
  std::int64_t v = parse_i64(s, what, line_no);
  if (v != 1 && v != -1)
    throw std::runtime_error(std::string(what) + ": z must be +1 or -1 at line " +
                             std::to_string(line_no));
  return std::int8_t(v);
}

}  // namespace

void write_he_csv(const std::vector<HeReport>& reports,
                  const std::string& path) {
  write_baseline<HeReport>(reports, path, "HE", "write_he_csv",
                           [](std::ofstream& out, const HeReport& r) {
                             out << r.j << ',' << int(r.z) << ",0,0\n";
                           });
}

std::vector<HeReport> read_he_csv(const std::string& path) {
  auto rows = read_baseline(path, "HE", "read_he_csv");
  std::vector<HeReport> out;
  out.reserve(rows.size());
  for (const auto& f : rows) {
    std::size_t line_no = std::stoul(f[5]);
    HeReport r;
    r.j = parse_u64(f[1], "read_he_csv", line_no);
    r.z = parse_sign(f[2], "read_he_csv", line_no);
    out.push_back(r);
  }
  return out;
}

void write_rhr_csv(const std::vector<RhrReport>& reports,
                   const std::string& path) {
  write_baseline<RhrReport>(reports, path, "RHR", "write_rhr_csv",
                            [](std::ofstream& out, const RhrReport& r) {
                              out << r.j << ',' << r.z << ",0,0\n";
                            });
}

std::vector<RhrReport> read_rhr_csv(const std::string& path) {
  auto rows = read_baseline(path, "RHR", "read_rhr_csv");
  std::vector<RhrReport> out;
  out.reserve(rows.size());
  for (const auto& f : rows) {
    std::size_t line_no = std::stoul(f[5]);
    RhrReport r;
    r.j = parse_u64(f[1], "read_rhr_csv", line_no);
    std::uint64_t z = parse_u64(f[2], "read_rhr_csv", line_no);
    if (z > 0xFFFFFFFFull)
      throw std::runtime_error("read_rhr_csv: z exceeds 32 bits at line " +
                               std::to_string(line_no));
    r.z = std::uint32_t(z);
    out.push_back(r);
  }
  return out;
}

void write_cms_he_csv(const std::vector<CmsHeReport>& reports,
                      const std::string& path) {
  write_baseline<CmsHeReport>(
      reports, path, "CMSHE", "write_cms_he_csv",
      [](std::ofstream& out, const CmsHeReport& r) {
        out << r.j << ',' << int(r.z) << ',' << r.a0 << ',' << r.a1 << '\n';
      });
}

std::vector<CmsHeReport> read_cms_he_csv(const std::string& path) {
  auto rows = read_baseline(path, "CMSHE", "read_cms_he_csv");
  std::vector<CmsHeReport> out;
  out.reserve(rows.size());
  for (const auto& f : rows) {
    std::size_t line_no = std::stoul(f[5]);
    CmsHeReport r;
    r.j = parse_u64(f[1], "read_cms_he_csv", line_no);
    r.z = parse_sign(f[2], "read_cms_he_csv", line_no);
    r.a0 = parse_u64(f[3], "read_cms_he_csv", line_no);
    r.a1 = parse_u64(f[4], "read_cms_he_csv", line_no);
    out.push_back(r);
  }
  return out;
}

constexpr const char* kTrialsHeader = "algorithm,epsilon,trial,x,estimate,truth";

void write_trials_csv(const std::vector<TrialMetrics>& trials,
                      const std::string& path) {
  std::ofstream out = open_out(path, "write_trials_csv");
  out << kTrialsHeader << '\n';
  for (const TrialMetrics& t : trials) {
    if (t.estimates.size() != t.x_set.size() ||
        t.truth.size() != t.x_set.size())
      throw std::invalid_argument("write_trials_csv: malformed trial");
    for (std::size_t i = 0; i < t.x_set.size(); ++i)
      out << t.algorithm << ',' << format_double(t.epsilon) << ',' << t.trial
          << ',' << t.x_set[i] << ',' << format_double(t.estimates[i]) << ','
          << format_double(t.truth[i]) << '\n';
  }
  if (!out)
    throw std::runtime_error("write_trials_csv: write failed: " + path);
}

std::vector<TrialMetrics> read_trials_csv(const std::string& path) {
  auto lines = split_lines(read_text(path, "read_trials_csv"));
  expect_header(lines, kTrialsHeader, "read_trials_csv");
  std::vector<TrialMetrics> out;
  std::map<std::tuple<std::string, double, std::uint64_t>, std::size_t> index;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto f = split_fields(lines[i]);
    expect_fields(f, 6, "read_trials_csv", i + 1);
    double eps = parse_double(f[1], "read_trials_csv", i + 1);
    std::uint64_t trial = parse_u64(f[2], "read_trials_csv", i + 1);
    auto key = std::make_tuple(f[0], eps, trial);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      TrialMetrics t;
      t.algorithm = f[0];
      t.epsilon = eps;
      t.trial = trial;
      out.push_back(std::move(t));
    }
    TrialMetrics& t = out[it->second];
    t.x_set.push_back(parse_u64(f[3], "read_trials_csv", i + 1));
    t.estimates.push_back(parse_double(f[4], "read_trials_csv", i + 1));
    t.truth.push_back(parse_double(f[5], "read_trials_csv", i + 1));
  }
  return out;
}

void write_summary_csv(const std::vector<LossSummary>& rows,
                       const std::string& path) {
  std::ofstream out = open_out(path, "write_summary_csv");
  out << "algorithm,epsilon,worst_mse,l1,l2,theory_mse,theory_l1_upper,"
         "theory_l2,mse_upper_bound\n";
  for (const LossSummary& r : rows)
    out << r.algorithm << ',' << format_double(r.epsilon) << ','
        << format_double(r.empirical.worst_mse) << ','
        << format_double(r.empirical.l1) << ',' << format_double(r.empirical.l2)
        << ',' << format_double(r.theory_mse) << ','
        << format_double(r.theory_l1_upper) << ','
        << format_double(r.theory_l2) << ','
        << format_double(r.mse_upper_bound) << '\n';
  if (!out)
    throw std::runtime_error("write_summary_csv: write failed: " + path);
}

}  // namespace ocms
