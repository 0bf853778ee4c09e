#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mogp/dataset.hpp"
#include "support/synthetic.hpp"

#ifndef MOGP_CLI_PATH
#error "MOGP_CLI_PATH must point at the built command line binary"
#endif

namespace {

namespace fs = std::filesystem;

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_cli(const std::string& args, const fs::path& scratch) {
  const fs::path log = scratch / "cli_output.txt";
  const std::string command =
      std::string(MOGP_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int raw = std::system(command.c_str());
  CommandResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(log);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  return result;
}

class CliTest : public ::testing::Test {
 protected:
  fs::path root;
  fs::path data_dir;
  fs::path config_file;

  void SetUp() override {
    root = fs::temp_directory_path() / "mogp_cli_test";
    fs::remove_all(root);
    data_dir = root / "data";
    fs::create_directories(data_dir);
    const mogp::Dataset ds = mogp::synth::synthetic_dataset("synthetic", 50, 10, 3, 17);
    mogp::write_canonical_csv(ds, data_dir / "synthetic.csv");
    config_file = root / "experiment.cfg";
    std::ofstream cfg(config_file);
    cfg << "dataset = synthetic\n"
           "variant = sdo\n"
           "ubss = 0.5\n"
           "pop_size = 12\n"
           "generations = 2\n"
           "runs = 3\n";
  }

  std::size_t result_files(const fs::path& dir) const {
    std::size_t n = 0;
    if (!fs::exists(dir)) return 0;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.path().extension() == ".json") ++n;
    return n;
  }
};

TEST_F(CliTest, UsageErrorsExitWithOne) {
  EXPECT_EQ(run_cli("", root).exit_code, 1);
  EXPECT_EQ(run_cli("run", root).exit_code, 1);  // --config is required
  EXPECT_EQ(run_cli("no-such-command", root).exit_code, 1);
  EXPECT_EQ(run_cli("--help", root).exit_code, 0);
}

TEST_F(CliTest, CampaignRunsThenResumesFromCache) {
  const fs::path out = root / "results";
  const CommandResult first = run_cli("campaign --config " + config_file.string() +
                                          " --data-dir " + data_dir.string() +
                                          " --output-dir " + out.string(),
                                      root);
  EXPECT_EQ(first.exit_code, 0) << first.output;
  EXPECT_NE(first.output.find("executed 3, cached 0, failed 0"), std::string::npos)
      << first.output;
  EXPECT_EQ(result_files(out), 3u);
  EXPECT_TRUE(fs::exists(out / "manifest.tsv"));

  const CommandResult second = run_cli("campaign --config " + config_file.string() +
                                           " --data-dir " + data_dir.string() +
                                           " --output-dir " + out.string(),
                                       root);
  EXPECT_EQ(second.exit_code, 0);
  EXPECT_NE(second.output.find("executed 0, cached 3, failed 0"), std::string::npos)
      << second.output;
}

TEST_F(CliTest, SingleRunWritesOneFile) {
  const fs::path out = root / "single";
  const CommandResult r = run_cli("run --config " + config_file.string() + " --run-index 1" +
                                      " --data-dir " + data_dir.string() + " --output-dir " +
                                      out.string(),
                                  root);
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_EQ(result_files(out), 1u);
  EXPECT_TRUE(fs::exists(out / "synthetic_nsga2_sdo_u0.5_r1.json"));
}

TEST_F(CliTest, ReportComparesTwoMethods) {
  const fs::path out = root / "results";
  std::ofstream extra(config_file, std::ios::app);
  extra << "\n";
  extra.close();
  // Baseline runs for the comparison partner.
  const fs::path base_cfg = root / "baseline.cfg";
  std::ofstream bc(base_cfg);
  bc << "dataset = synthetic\npop_size = 12\ngenerations = 2\nruns = 3\n";
  bc.close();
  ASSERT_EQ(run_cli("campaign --config " + config_file.string() + " --data-dir " +
                        data_dir.string() + " --output-dir " + out.string(),
                    root)
                .exit_code,
            0);
  ASSERT_EQ(run_cli("campaign --config " + base_cfg.string() + " --data-dir " +
                        data_dir.string() + " --output-dir " + out.string(),
                    root)
                .exit_code,
            0);

  const fs::path report = root / "report";
  const CommandResult r = run_cli("report --results " + out.string() +
                                      " --method-a nsga2:sdo --method-b nsga2" +
                                      " --expected-runs 3 --output " + report.string(),
                                  root);
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_TRUE(fs::exists(report / "summary.csv"));
  EXPECT_TRUE(fs::exists(report / "comparison.csv"));

  const CommandResult plot =
      run_cli("plot-data --results " + out.string() + " --output " + report.string(), root);
  EXPECT_EQ(plot.exit_code, 0) << plot.output;
  EXPECT_TRUE(fs::exists(report / "sizes_over_generations.csv"));
  EXPECT_TRUE(fs::exists(report / "po_front_points.csv"));

  const CommandResult incomplete = run_cli("report --results " + out.string() +
                                               " --method-a nsga2:sdo --method-b nsga2" +
                                               " --expected-runs 50 --output " + report.string(),
                                           root);
  EXPECT_EQ(incomplete.exit_code, 2);
  EXPECT_NE(incomplete.output.find("error:"), std::string::npos);
}

TEST_F(CliTest, DataProblemsExitWithTwo) {
  const CommandResult missing_csv = run_cli("campaign --config " + config_file.string() +
                                                " --data-dir " + (root / "nowhere").string() +
                                                " --output-dir " + (root / "r2").string(),
                                            root);
  EXPECT_EQ(missing_csv.exit_code, 2);
  EXPECT_NE(missing_csv.output.find("error:"), std::string::npos);

  EXPECT_EQ(run_cli("ingest --dataset nope --input x.csv --output y.csv", root).exit_code, 2);
  EXPECT_EQ(run_cli("ingest --dataset ion --input " + (root / "absent.data").string() +
                        " --output " + (root / "ion.csv").string(),
                    root)
                .exit_code,
            2);

  const fs::path bad_cfg = root / "bad.cfg";
  std::ofstream bad(bad_cfg);
  bad << "variant = scd\n";  // thresholds missing
  bad.close();
  EXPECT_EQ(run_cli("run --config " + bad_cfg.string() + " --run-index 0", root).exit_code, 2);
}

}  // namespace
