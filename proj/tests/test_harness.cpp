#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "clobench/harness.hpp"

using namespace clobench;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path test_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "clobench_harness_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("minimal config fills documented defaults") {
  const ExperimentConfig cfg = parse_config({{"experiment", "simple_example"}, {"sigma2", 1.0}});
  CHECK(cfg.n_grid == simple_rate_n_grid());
  CHECK(cfg.n_grid.size() == 19);
  CHECK(cfg.n_grid.front() == 32);
  CHECK(cfg.n_grid.back() == 2048);
  CHECK(cfg.replications == 50);
  CHECK(cfg.test_size == 10000);
  CHECK(cfg.sgd.batch_size == 10);
  CHECK(cfg.sgd.iterations == 1000);
  CHECK(cfg.sgd.step_scale == 1.0);
  CHECK(cfg.eval_mode == "grid");
  REQUIRE(cfg.methods.size() == 3);
  CHECK(cfg.methods[0].estimator == "eto");
  CHECK(cfg.methods[0].hypothesis == "threshold");
}

TEST_CASE("config validation names the offending field") {
  CHECK_THROWS_WITH_AS(parse_config({{"experiment", "simple_example"}, {"replications", 0}}),
                       doctest::Contains("replications"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config({{"experiment", "simple_example"}, {"banana", 1}}),
                       doctest::Contains("banana"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config({{"experiment", "simple_example"}, {"n_grid", {10, 10}}}),
      doctest::Contains("n_grid"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config({{"experiment", "unknown"}}), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config({{"experiment", "simple_example"}, {"methods", {"bogus"}}}),
      doctest::Contains("bogus"), std::invalid_argument);
}

TEST_CASE("config round trip is the identity") {
  const json doc = {{"experiment", "shortest_path"},
                    {"n_grid", {50, 100}},
                    {"replications", 2},
                    {"test_size", 128},
                    {"methods", {"eto:kernel", "spo_plus:wrong_linear", "truth"}},
                    {"master_seed", 99}};
  const ExperimentConfig cfg = parse_config(doc);
  const json echoed = config_to_json(cfg);
  const ExperimentConfig cfg2 = parse_config(echoed);
  CHECK(config_to_json(cfg2).dump() == echoed.dump());
}

TEST_CASE("truth method has exactly zero regret everywhere") {
  ExperimentConfig cfg;
  cfg.experiment = "simple_example";
  cfg.n_grid = {8, 16};
  cfg.replications = 3;
  cfg.sigma2 = 1.0;
  cfg.methods = {{"truth", "oracle"}};
  cfg.eval_mode = "grid";
  cfg.eval_grid_points = 501;
  const RunResult result = run_replications(cfg);
  REQUIRE(result.rows.size() == 6);
  for (const auto& row : result.rows) {
    CHECK(row.regret == 0.0);
    CHECK(row.method == "truth");
    CHECK(row.hypothesis == "oracle");
  }
}

TEST_CASE("noiseless threshold ERM regret matches the closed form") {
  ExperimentConfig cfg;
  cfg.experiment = "simple_example";
  cfg.n_grid = {1, 2};
  cfg.replications = 4000;
  cfg.sigma2 = 0.0;
  cfg.methods = {{"ierm_left", "threshold"}};
  cfg.eval_mode = "exact";
  cfg.master_seed = 2024;
  const RunResult result = run_replications(cfg);
  for (Eigen::Index n : cfg.n_grid) {
    double sum = 0.0, sum_sq = 0.0;
    int count = 0;
    for (const auto& row : result.rows) {
      if (row.n != n) continue;
      sum += row.regret;
      sum_sq += row.regret * row.regret;
      ++count;
    }
    const double mean = sum / count;
    const double se = std::sqrt((sum_sq / count - mean * mean) / count);
    CHECK(std::abs(mean - ierm_regret_exact_noiseless(n)) <= 3.0 * se);
  }
}

TEST_CASE("surrogate training runs through the simple harness") {
  ExperimentConfig cfg;
  cfg.experiment = "simple_example";
  cfg.n_grid = {50};
  cfg.replications = 3;
  cfg.sigma2 = 0.0;
  cfg.methods = {{"spo_plus", "threshold"}};
  cfg.eval_mode = "exact";
  cfg.sgd.iterations = 400;
  cfg.master_seed = 5150;
  const RunResult result = run_replications(cfg);
  REQUIRE(result.rows.size() == 3);
  for (const auto& row : result.rows) {
    CHECK(row.regret >= 0.0);
    CHECK(row.regret <= 0.25);  // theta stays well inside the interval
  }
  const RunResult again = run_replications(cfg);
  CHECK(report_csv(result.rows) == report_csv(again.rows));
}

TEST_CASE("runs are deterministic across repetition and thread counts") {
  ExperimentConfig cfg;
  cfg.experiment = "simple_example";
  cfg.n_grid = {16, 32};
  cfg.replications = 6;
  cfg.sigma2 = 1.0;
  cfg.methods = {{"eto", "threshold"}, {"ierm_left", "threshold"}};
  cfg.eval_mode = "sample";
  cfg.test_size = 200;
  cfg.master_seed = 31415;

  cfg.threads = 1;
  const std::string first = report_csv(run_replications(cfg).rows);
  const std::string second = report_csv(run_replications(cfg).rows);
  CHECK(first == second);
  cfg.threads = 4;
  const std::string threaded = report_csv(run_replications(cfg).rows);
  CHECK(first == threaded);
}

TEST_CASE("report csv schema and round trip") {
  CHECK(std::string(kReportCsvHeader) ==
        "method,hypothesis,n,replication,regret,relative_regret,regret_se,test_size,seed");
  ExperimentConfig cfg;
  cfg.experiment = "simple_example";
  cfg.n_grid = {8};
  cfg.replications = 2;
  cfg.methods = {{"eto", "threshold"}};
  cfg.eval_mode = "exact";
  const RunResult result = run_replications(cfg);
  const auto dir = test_dir();
  const std::string path = (dir / "report.csv").string();
  write_file_atomic(path, report_csv(result.rows));
  const auto rows = read_report_csv(path);
  REQUIRE(rows.size() == result.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].regret == result.rows[i].regret);
    CHECK(rows[i].method == result.rows[i].method);
  }
}

TEST_CASE("slope postprocessing recovers a planted rate") {
  std::vector<ReportRow> rows;
  for (Eigen::Index n : {32, 64, 128, 256}) {
    for (int rep = 0; rep < 3; ++rep) {
      ReportRow row;
      row.method = "eto";
      row.hypothesis = "threshold";
      row.n = n;
      row.replication = rep;
      row.regret = 0.5 / static_cast<double>(n);
      rows.push_back(row);
    }
  }
  const auto slopes = slopes_from_rows(rows);
  REQUIRE(slopes.size() == 1);
  CHECK(slopes[0].fit.slope == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(slopes[0].fit.points_used == 4);
}

TEST_CASE("unwritable outputs leave no partial files") {
  ExperimentConfig cfg;
  cfg.experiment = "simple_example";
  cfg.n_grid = {4};
  cfg.replications = 1;
  cfg.methods = {{"eto", "threshold"}};
  cfg.eval_mode = "exact";
  cfg.output_path = "/proc/definitely/not/writable/report.csv";
  std::ostringstream log;
  CHECK(run_experiment(cfg, log) != 0);
  CHECK_FALSE(std::filesystem::exists(cfg.output_path));
}

TEST_CASE("oracle check experiment reports a pass") {
  const auto dir = test_dir();
  ExperimentConfig cfg;
  cfg.experiment = "oracle_check";
  cfg.n_grid = {1};
  cfg.output_path = (dir / "oracle.csv").string();
  std::ostringstream log;
  CHECK(run_experiment(cfg, log) == 0);
  CHECK(slurp(cfg.output_path) == "check,status\ngrid_dp_vs_enumeration,pass\n");
  CHECK(std::filesystem::exists(cfg.output_path + ".manifest.json"));
}

TEST_CASE("noise profile experiment writes the distribution") {
  const auto dir = test_dir();
  ExperimentConfig cfg;
  cfg.experiment = "noise_profile";
  cfg.n_grid = {1};
  cfg.test_size = 20000;
  cfg.output_path = (dir / "profile.csv").string();
  std::ostringstream log;
  CHECK(run_experiment(cfg, log) == 0);
  const std::string contents = slurp(cfg.output_path);
  CHECK(contents.rfind("delta,prob\n", 0) == 0);
  const json manifest = json::parse(slurp(cfg.output_path + ".manifest.json"));
  CHECK(manifest.at("alpha_defined").get<bool>());
  CHECK(std::abs(manifest.at("alpha_hat").get<double>() - 1.0) < 0.15);
}

TEST_CASE("full simple run writes csv slopes and manifest atomically") {
  const auto dir = test_dir();
  ExperimentConfig cfg;
  cfg.experiment = "simple_example";
  cfg.n_grid = {8, 16, 32, 64};
  cfg.replications = 20;
  cfg.sigma2 = 1.0;
  cfg.methods = {{"eto", "threshold"}};
  cfg.eval_mode = "exact";
  cfg.output_path = (dir / "simple.csv").string();
  std::ostringstream log;
  REQUIRE(run_experiment(cfg, log) == 0);
  CHECK(std::filesystem::exists(cfg.output_path));
  CHECK(std::filesystem::exists(cfg.output_path + ".slopes.csv"));
  const json manifest = json::parse(slurp(cfg.output_path + ".manifest.json"));
  CHECK(manifest.at("rows_written").get<int>() == 80);
  CHECK(manifest.at("failures").at("eto:threshold").get<int>() == 0);
}
