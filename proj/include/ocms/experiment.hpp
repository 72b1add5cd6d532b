#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ocms/analysis.hpp"
#include "ocms/datasets.hpp"

namespace ocms {

// Flat JSON config; unknown keys are rejected.
struct ExperimentConfig {
  std::string dataset = "zipf";  // zipf | zipf_mod16 | gaussian | kosarak | file
  std::string kosarak_path;
  std::string dataset_path;      // for dataset == "file"
  std::uint64_t d = 100000;
  std::uint64_t n = 10000;
  std::vector<std::string> algorithms;  // OCMS_MSE OCMS_L HE RHR CMSHE OLH
  std::vector<double> epsilons = {1, 2, 3, 4, 5};
  std::uint64_t trials = 100;
  std::string x_mode = "top_k";  // top_k | all | list
  std::uint64_t x_k = 100;
  std::vector<std::uint64_t> x_values;
  double f_star = 1.0;
  bool clip = false;
  double kosarak_rate = 1.0;
  std::uint64_t cms_he_m1 = 1024;
  std::uint64_t seed = 1;
  std::string output_dir = "out";
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

// Builds the dataset named by the config (generators seeded from
// config.seed).
Dataset make_dataset(const ExperimentConfig& cfg);

// The query set: the x_k most frequent items (ties to the smaller value),
// the whole dictionary, or an explicit list.
std::vector<std::uint64_t> select_x_set(const ExperimentConfig& cfg,
                                        const Dataset& ds);

struct ExperimentResult {
  std::vector<TrialMetrics> trials;     // every (algorithm, epsilon, trial)
  std::vector<LossSummary> summaries;   // one row per (algorithm, epsilon)
};

// Runs every configured algorithm at every epsilon. Per-client randomness is
// keyed by (seed, epsilon index, trial, client), so a given client's report
// stream is reproducible independent of which algorithms run.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const Dataset& ds);

// Writes trials_<alg>.csv per algorithm, summary.csv, and manifest.json
// into cfg.output_dir.
void write_experiment(const ExperimentConfig& cfg,
                      const ExperimentResult& result);

// Recomputes summaries from per-trial rows (empirical part only; theory
// columns are filled from the row's algorithm and epsilon).
std::vector<LossSummary> summarize_trials(
    const std::vector<TrialMetrics>& trials, std::uint64_t d, std::uint64_t n);

// Predicted-loss and communication-cost table across algorithms for one
// (d, epsilon, n); used by the `tables` subcommand.
std::string tables_csv(std::uint64_t d, double epsilon, std::uint64_t n);

}  // namespace ocms
