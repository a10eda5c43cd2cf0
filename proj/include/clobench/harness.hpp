#ifndef CLOBENCH_HARNESS_HPP
#define CLOBENCH_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "clobench/datagen.hpp"
#include "clobench/evaluation.hpp"
#include "clobench/spo_plus.hpp"

namespace clobench {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// Declarative description of a benchmark run. Key names are frozen;
/// parse_config rejects unknown keys and invariant violations by name.
struct ExperimentConfig {
  std::string experiment;  // simple_example | shortest_path | noise_profile | oracle_check
  std::vector<Eigen::Index> n_grid;       // nonempty, strictly increasing
  int replications = 50;
  double sigma2 = 1.0;                    // simple example noise variance
  Eigen::Index test_size = 10000;         // fresh evaluation draws (or profile sample size)
  std::vector<MethodSpec> methods;
  HyperGrids grids;
  std::vector<double> delta_grid;         // noise profile thresholds
  SgdConfig sgd;
  std::uint64_t master_seed = 1;
  std::string output_path = "report.csv";
  int threads = 0;                        // 0 = hardware concurrency
  std::string eval_mode = "default";      // simple example: grid | exact | sample
  Eigen::Index eval_grid_points = 20001;  // dense-grid evaluation resolution
  bool wrong_linear_intercept = true;
  std::uint64_t coefficient_seed = kDefaultCoefficientSeed;
};

/// The default simple-example size ladder: 19 geometric points from 32
/// to 2048 (ratio 2^(1/3), rounded).
const std::vector<Eigen::Index>& simple_rate_n_grid();

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_file(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// One line of the report CSV.
struct ReportRow {
  std::string method;
  std::string hypothesis;
  Eigen::Index n = 0;
  int replication = 0;
  double regret = 0.0;
  double relative_regret = 0.0;
  double regret_se = 0.0;
  Eigen::Index test_size = 0;
  std::uint64_t seed = 0;
};

struct ReplicationFailure {
  std::string method;
  Eigen::Index n = 0;
  int replication = 0;
  std::string message;
};

struct RunResult {
  std::vector<ReportRow> rows;  // ordered by (method, n, replication)
  std::vector<ReplicationFailure> failures;
};

/**
 * Runs every (method, n, replication) cell of the configured experiment.
 * Data, validation, test and SGD streams are derived from the master
 * seed by (phase, n, replication) labels, so results are independent of
 * the number of worker threads and any single replication can be
 * regenerated alone. Per-cell failures are collected, not fatal.
 */
RunResult run_replications(const ExperimentConfig& config);

inline constexpr const char* kReportCsvHeader =
    "method,hypothesis,n,replication,regret,relative_regret,regret_se,test_size,seed";

std::string report_csv(const std::vector<ReportRow>& rows);

/// Per-method log-log slope of mean regret against n.
struct MethodSlope {
  std::string method;
  std::string hypothesis;
  SlopeFit fit;
};

std::vector<MethodSlope> slopes_from_rows(const std::vector<ReportRow>& rows);
std::string slopes_csv(const std::vector<MethodSlope>& slopes);

std::vector<ReportRow> read_report_csv(const std::string& path);

/// Writes via a temp file plus atomic rename; no partial outputs.
void write_file_atomic(const std::string& path, const std::string& contents);

struct OracleCheckReport {
  int checks = 0;
  int failures = 0;
  std::vector<std::string> messages;  // one per failed check
};

/// Cross-validates the grid dynamic program against exhaustive path
/// enumeration (values, argmins, margin gaps) on small grids.
OracleCheckReport run_oracle_check(std::uint64_t seed);

/**
 * Full CLI entry: dispatches on config.experiment, writes the report CSV,
 * a slope summary for rate experiments, and a run manifest next to the
 * output. Returns the process exit code (0 only if every requested
 * method produced at least one successful replication per n and all
 * files were written).
 */
int run_experiment(const ExperimentConfig& config, std::ostream& log);

}  // namespace clobench

#endif  // CLOBENCH_HARNESS_HPP
