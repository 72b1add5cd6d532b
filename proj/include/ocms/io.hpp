#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ocms/analysis.hpp"
#include "ocms/baselines.hpp"
#include "ocms/cms.hpp"

namespace ocms {

// Shortest round-trip decimal for a double (printf %.17g trimmed by
// to_chars).
std::string format_double(double v);

// reports.csv: header "z,a0,a1", one report per line.
void write_reports_csv(const std::vector<Report>& reports,
                       const std::string& path);
std::vector<Report> read_reports_csv(const std::string& path);

// Packed little-endian records: u32 z, u64 a0, u64 a1 (20 bytes each).
void write_reports_packed(const std::vector<Report>& reports,
                          const std::string& path);
std::vector<Report> read_reports_packed(const std::string& path);

// Baseline reports share one CSV schema: "alg,j,z,a0,a1" with a0 = a1 = 0
// for the hash-free algorithms. alg is HE, RHR, or CMSHE.
void write_he_csv(const std::vector<HeReport>& reports,
                  const std::string& path);
std::vector<HeReport> read_he_csv(const std::string& path);
void write_rhr_csv(const std::vector<RhrReport>& reports,
                   const std::string& path);
std::vector<RhrReport> read_rhr_csv(const std::string& path);
void write_cms_he_csv(const std::vector<CmsHeReport>& reports,
                      const std::string& path);
std::vector<CmsHeReport> read_cms_he_csv(const std::string& path);

// trials CSV: "algorithm,epsilon,trial,x,estimate,truth", one row per
// (trial, item).
void write_trials_csv(const std::vector<TrialMetrics>& trials,
                      const std::string& path);
std::vector<TrialMetrics> read_trials_csv(const std::string& path);

// summary CSV: "algorithm,epsilon,worst_mse,l1,l2,theory_mse,
// theory_l1_upper,theory_l2,mse_upper_bound".
void write_summary_csv(const std::vector<LossSummary>& rows,
                       const std::string& path);

}  // namespace ocms
