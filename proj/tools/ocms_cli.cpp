// Command-line harness for the locally private frequency estimators:
//   datagen  synthesize or ingest a dataset and write it to a file
//   run      run configured algorithms over a dataset, write trials + summary
//   analyze  recompute a summary from previously written trial files
//   tables   print predicted losses and per-report communication costs
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ocms/analysis.hpp"
#include "ocms/datasets.hpp"
#include "ocms/experiment.hpp"
#include "ocms/io.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
};

// End-user runs clamp estimates to [0, 1] unless the config or a flag says
// otherwise; library callers (and the statistical tests) default to
// unclipped, unbiased estimates.
ocms::ExperimentConfig load_run_config(const CommonOpts& opts) {
  std::ifstream in(opts.config_path, std::ios::binary);
  if (!in)
    throw std::runtime_error("config: cannot open " + opts.config_path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  ocms::ExperimentConfig cfg = ocms::parse_config(text);
  if (!nlohmann::json::parse(text).contains("clip")) cfg.clip = true;
  if (opts.seed_set) cfg.seed = opts.seed;
  if (!opts.out.empty()) cfg.output_dir = opts.out;
  return cfg;
}

void print_summaries(const std::vector<ocms::LossSummary>& rows,
                     std::ostream& out) {
  out << "algorithm,epsilon,worst_mse,l1,l2,theory_mse,theory_l1_upper,"
         "theory_l2,mse_upper_bound\n";
  for (const ocms::LossSummary& r : rows)
    out << r.algorithm << ',' << ocms::format_double(r.epsilon) << ','
        << ocms::format_double(r.empirical.worst_mse) << ','
        << ocms::format_double(r.empirical.l1) << ','
        << ocms::format_double(r.empirical.l2) << ','
        << ocms::format_double(r.theory_mse) << ','
        << ocms::format_double(r.theory_l1_upper) << ','
        << ocms::format_double(r.theory_l2) << ','
        << ocms::format_double(r.mse_upper_bound) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally private frequency estimation harness"};
  app.require_subcommand(1);

  CommonOpts datagen_opts, run_opts, analyze_opts;
  std::vector<std::string> trial_files;
  bool clip_flag = false, no_clip_flag = false;

  CLI::App* datagen =
      app.add_subcommand("datagen", "Generate a dataset and write it out");
  datagen->add_option("--config", datagen_opts.config_path, "Config JSON path")
      ->required();
  datagen->add_option("--seed", datagen_opts.seed, "Override the config seed");
  datagen->add_option("--out", datagen_opts.out, "Output dataset path")
      ->required();

  CLI::App* run = app.add_subcommand(
      "run", "Run the configured algorithms and write trials + summary");
  run->add_option("--config", run_opts.config_path, "Config JSON path")
      ->required();
  run->add_option("--seed", run_opts.seed, "Override the config seed");
  run->add_option("--out", run_opts.out, "Override the config output_dir");
  run->add_flag("--clip", clip_flag, "Clamp estimates to [0, 1]");
  run->add_flag("--no-clip", no_clip_flag, "Report raw unbiased estimates");

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Summarize previously written trial CSV files");
  analyze->add_option("--config", analyze_opts.config_path, "Config JSON path")
      ->required();
  analyze->add_option("--out", analyze_opts.out,
                      "Summary CSV path (default: stdout)");
  analyze->add_option("trials", trial_files, "trial CSV files")
      ->required()
      ->expected(-1);

  std::uint64_t tab_d = 1048576, tab_n = 10000;
  std::vector<double> tab_eps;
  std::string tab_out;
  CLI::App* tables = app.add_subcommand(
      "tables", "Predicted losses and communication costs per algorithm");
  tables->add_option("--d", tab_d, "Dictionary size");
  tables->add_option("--n", tab_n, "Population size");
  tables->add_option("--eps", tab_eps, "Epsilon values (default 1..5)");
  tables->add_option("--out", tab_out, "Output CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);
  datagen_opts.seed_set = datagen->count("--seed") > 0;
  run_opts.seed_set = run->count("--seed") > 0;

  try {
    if (datagen->parsed()) {
      ocms::ExperimentConfig cfg = ocms::load_config(datagen_opts.config_path);
      if (datagen_opts.seed_set) cfg.seed = datagen_opts.seed;
      ocms::Dataset ds = ocms::make_dataset(cfg);
      ocms::write_dataset(ds, datagen_opts.out);
      std::cout << "wrote " << ds.values.size() << " values over d=" << ds.d
                << " to " << datagen_opts.out << "\n";
    } else if (run->parsed()) {
      ocms::ExperimentConfig cfg = load_run_config(run_opts);
      if (clip_flag) cfg.clip = true;
      if (no_clip_flag) cfg.clip = false;
      ocms::Dataset ds = ocms::make_dataset(cfg);
      ocms::ExperimentResult result = ocms::run_experiment(cfg, ds);
      ocms::write_experiment(cfg, result);
      print_summaries(result.summaries, std::cout);
      std::cout << "wrote " << result.trials.size() << " trial rows to "
                << cfg.output_dir << "\n";
    } else if (analyze->parsed()) {
      ocms::ExperimentConfig cfg = ocms::load_config(analyze_opts.config_path);
      ocms::Dataset ds = ocms::make_dataset(cfg);
      std::vector<ocms::TrialMetrics> trials;
      for (const std::string& path : trial_files) {
        std::vector<ocms::TrialMetrics> part = ocms::read_trials_csv(path);
        trials.insert(trials.end(), std::make_move_iterator(part.begin()),
                      std::make_move_iterator(part.end()));
      }
      std::vector<ocms::LossSummary> rows =
          ocms::summarize_trials(trials, ds.d, ds.values.size());
      if (analyze_opts.out.empty()) {
        print_summaries(rows, std::cout);
      } else {
        ocms::write_summary_csv(rows, analyze_opts.out);
        std::cout << "wrote " << rows.size() << " summary rows to "
                  << analyze_opts.out << "\n";
      }
    } else if (tables->parsed()) {
      if (tab_eps.empty()) tab_eps = {1, 2, 3, 4, 5};
      std::string out;
      for (std::size_t i = 0; i < tab_eps.size(); ++i) {
        std::string block = ocms::tables_csv(tab_d, tab_eps[i], tab_n);
        if (i == 0) {
          out += block;
        } else {
          out += block.substr(block.find('\n') + 1);
        }
      }
      if (tab_out.empty()) {
        std::cout << out;
      } else {
        std::ofstream f(tab_out);
        if (!f) throw std::runtime_error("tables: cannot open " + tab_out);
        f << out;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
