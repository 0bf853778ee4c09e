// Command line front end: dataset ingestion, single-config runs, the full
// campaign, and CSV reports over finished results.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mogp/dataset.hpp"
#include "mogp/experiment.hpp"

namespace {

namespace fs = std::filesystem;

unsigned default_jobs() {
  if (const char* env = std::getenv("MOGP_JOBS")) {
    const long value = std::strtol(env, nullptr, 10);
    if (value >= 1) return static_cast<unsigned>(value);
  }
  return 1;
}

mogp::Dataset load_dataset(const fs::path& data_dir, const std::string& name) {
  return mogp::read_canonical_csv((data_dir / (name + ".csv")).string(), name);
}

std::vector<std::string> config_datasets(const mogp::ParsedConfig& parsed,
                                         const std::string& origin) {
  if (!parsed.datasets.empty()) return parsed.datasets;
  if (!parsed.config.dataset.empty()) return {parsed.config.dataset};
  throw mogp::DataError(origin + ": no dataset(s) configured");
}

std::vector<mogp::ExperimentConfig> expand_configs(const mogp::ParsedConfig& parsed,
                                                   const std::string& origin) {
  const std::vector<std::string> datasets = config_datasets(parsed, origin);
  if (parsed.grid_full) return mogp::full_grid(parsed.config, datasets);
  std::vector<mogp::ExperimentConfig> configs;
  for (const std::string& dataset : datasets) {
    mogp::ExperimentConfig cfg = parsed.config;
    cfg.dataset = dataset;
    configs.push_back(std::move(cfg));
  }
  return configs;
}

int campaign_exit(const mogp::CampaignManifest& manifest) {
  std::cout << "executed " << manifest.executed << ", cached " << manifest.cached << ", failed "
            << manifest.failed << "\n";
  if (manifest.failed == 0) return 0;
  for (const mogp::CampaignEntry& entry : manifest.entries)
    if (entry.status.rfind("failed", 0) == 0)
      std::cerr << entry.run_id << ": " << entry.status << "\n";
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective genetic programming on unbalanced classification data"};
  app.require_subcommand(1);

  // --- ingest ---
  auto* ingest = app.add_subcommand("ingest", "Convert a raw dataset file to canonical CSV");
  std::string ingest_name, ingest_input, ingest_output;
  ingest->add_option("--dataset", ingest_name, "ion|spect|yeast1|yeast2|abal1|abal2")
      ->required();
  ingest->add_option("--input", ingest_input, "raw dataset file")->required();
  ingest->add_option("--output", ingest_output, "canonical CSV path")->required();

  // --- run / campaign ---
  auto* run = app.add_subcommand("run", "Execute the runs of one configuration");
  auto* campaign = app.add_subcommand("campaign", "Execute a (possibly factorial) campaign");
  std::string config_path, data_dir = "data", output_dir = "results";
  std::optional<std::size_t> run_index;
  unsigned jobs = default_jobs();
  for (CLI::App* cmd : {run, campaign}) {
    cmd->add_option("--config", config_path, "flat key=value configuration file")->required();
    cmd->add_option("--data-dir", data_dir, "directory of canonical CSVs");
    cmd->add_option("--output-dir", output_dir, "directory for result files");
    cmd->add_option("--jobs", jobs, "max concurrent runs (default from MOGP_JOBS)");
  }
  run->add_option("--run-index", run_index, "execute a single run index");

  // --- report / plot-data ---
  auto* report = app.add_subcommand("report", "Summaries, verdicts, and unique solutions");
  std::string results_dir, method_a, method_b = "nsga2", report_out = "report";
  std::size_t expected_runs = 50;
  double alpha = 0.05;
  report->add_option("--results", results_dir, "directory of run result files")->required();
  report->add_option("--method-a", method_a, "scheme[:variant], e.g. nsga2:sdo")->required();
  report->add_option("--method-b", method_b, "comparison method (default nsga2)");
  report->add_option("--expected-runs", expected_runs, "runs required per cell");
  report->add_option("--alpha", alpha, "rank-sum significance level");
  report->add_option("--output", report_out, "report directory");

  auto* plot = app.add_subcommand("plot-data", "Plot-ready CSVs from finished results");
  std::string plot_results, plot_out = "plot-data";
  plot->add_option("--results", plot_results, "directory of run result files")->required();
  plot->add_option("--output", plot_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*ingest) {
      const std::optional<mogp::DatasetId> id = mogp::dataset_id(ingest_name);
      if (!id) throw mogp::DataError("unknown dataset: '" + ingest_name + "'");
      const mogp::Dataset ds = mogp::ingest_dataset(ingest_input, *id);
      mogp::write_canonical_csv(ds, ingest_output);
      std::cout << ds.name << ": " << ds.rows() << " rows, " << ds.feature_count()
                << " features, " << ds.positive_count << " positive\n";
      return 0;
    }
    if (*run || *campaign) {
      const mogp::ParsedConfig parsed = mogp::load_config_file(config_path);
      std::vector<mogp::ExperimentConfig> configs = expand_configs(parsed, config_path);
      if (*run && configs.size() != 1)
        throw mogp::DataError(config_path + ": run expects exactly one configuration; use campaign");
      std::map<std::string, mogp::Dataset> datasets;
      for (const std::string& name : config_datasets(parsed, config_path))
        datasets.emplace(name, load_dataset(data_dir, name));
      if (*run && run_index) {
        const mogp::RunResult result =
            mogp::run_one(configs[0], *run_index, datasets.at(configs[0].dataset));
        mogp::write_run_file(output_dir, result);
        std::cout << result.run_id << ": hyperarea " << mogp::format_real(result.hypervolume)
                  << "\n";
        return 0;
      }
      return campaign_exit(mogp::run_campaign(configs, datasets, output_dir, jobs));
    }
    if (*report) {
      const std::vector<mogp::RunResult> results = mogp::load_results_dir(results_dir);
      const std::vector<mogp::CellComparison> rows =
          mogp::write_report(results, mogp::parse_method(method_a), mogp::parse_method(method_b),
                             expected_runs, report_out, alpha);
      std::cout << rows.size() << " comparison rows -> " << report_out << "\n";
      return 0;
    }
    if (*plot) {
      mogp::write_plot_data(mogp::load_results_dir(plot_results), plot_out);
      std::cout << "plot data -> " << plot_out << "\n";
      return 0;
    }
  } catch (const mogp::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
