#include "clobench/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include "clobench/datagen.hpp"
#include "clobench/estimators.hpp"

namespace clobench {

namespace {

// Substream phase labels (frozen; reseeding depends on them).
enum Phase : std::uint64_t { kTrain = 1, kVal = 2, kTest = 3, kSgd = 4 };

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Task {
  std::size_t method_index;
  std::size_t n_index;
  int replication;
};

struct TaskOutcome {
  bool ok = false;
  ReportRow row;
  std::string error;
};

class SimpleTruth {
 public:
  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return x; }
};

ReportRow evaluate_simple_threshold(const ExperimentConfig& cfg, const MethodSpec& method,
                                    Eigen::Index n, int rep, double theta,
                                    const RngStream& root) {
  ReportRow row{method.estimator, method.hypothesis, n, rep, 0, 0, 0, 0, cfg.master_seed};
  if (cfg.eval_mode == "exact") {
    row.regret = exact_threshold_regret(theta);
    row.relative_regret = row.regret / kSimpleOptimalCost;
    row.test_size = 0;
    return row;
  }
  Eigen::MatrixXd xs;
  if (cfg.eval_mode == "grid") {
    xs.resize(cfg.eval_grid_points, 1);
    const double step = 2.0 / static_cast<double>(cfg.eval_grid_points - 1);
    for (Eigen::Index i = 0; i < cfg.eval_grid_points; ++i) xs(i, 0) = -1.0 + step * i;
  } else {
    xs = gen_simple_xs(cfg.test_size, root.derive(kTest, n, rep));
  }
  const IntervalSet interval;
  const Predictor predictor = threshold_predictor(theta);
  const RegretStats stats =
      policy_regret(as_predict_fn(predictor), SimpleTruth{}, interval, xs);
  row.regret = stats.regret;
  row.relative_regret = stats.relative_regret;
  row.regret_se = stats.regret_se;
  row.test_size = xs.rows();
  return row;
}

TaskOutcome run_simple_cell(const ExperimentConfig& cfg, const MethodSpec& method,
                            Eigen::Index n, int rep, const RngStream& root) {
  TaskOutcome out;
  const Dataset train = gen_simple(n, SimpleDgp{cfg.sigma2}, root.derive(kTrain, n, rep));
  double theta = 0.0;
  if (method.estimator == "eto") {
    theta = fit_threshold_ols(train);
  } else if (method.estimator == "ierm_left") {
    theta = fit_ierm_threshold(train, ThresholdRule::left_endpoint).theta;
  } else if (method.estimator == "ierm_mid") {
    theta = fit_ierm_threshold(train, ThresholdRule::midpoint).theta;
  } else if (method.estimator == "spo_plus") {
    const IntervalSet interval;
    const Predictor fitted =
        fit_spo_plus_sgd(train, ThresholdSpoFamily{}, interval, RidgeConfig{0.0}, cfg.sgd,
                         root.derive(kSgd, n, rep).derive(fnv1a(method.label())));
    theta = -std::get<LinearPredictor>(fitted).intercept[0];
  }  // truth keeps theta = 0
  out.row = evaluate_simple_threshold(cfg, method, n, rep, theta, root);
  out.ok = true;
  return out;
}

TaskOutcome run_shortest_path_cell(const ExperimentConfig& cfg, const MethodSpec& method,
                                   Eigen::Index n, int rep, const RngStream& root,
                                   const ShortestPathDgp& dgp, const GridDagSet& grid) {
  TaskOutcome out;
  const auto truth = [&dgp](const Eigen::VectorXd& x) {
    return true_regression_sp(x, dgp.coefficients);
  };
  PredictFn fitted_fn;
  if (method.estimator == "truth") {
    fitted_fn = truth;
  } else {
    const Dataset train = gen_shortest_path(n, dgp, root.derive(kTrain, n, rep));
    const Dataset val = gen_shortest_path(n, dgp, root.derive(kVal, n, rep));
    const ValidationChoice choice = select_hyperparams(
        train, val, method, cfg.grids, grid, cfg.sgd,
        root.derive(kSgd, n, rep).derive(fnv1a(method.label())), cfg.wrong_linear_intercept);
    fitted_fn = as_predict_fn(choice.predictor);
  }
  const Eigen::MatrixXd test_xs = gen_gaussian_xs(cfg.test_size, 5, root.derive(kTest, n, rep));
  const RegretStats stats = policy_regret(fitted_fn, truth, grid, test_xs);
  out.row = ReportRow{method.estimator, method.hypothesis,  n,
                      rep,              stats.regret,       stats.relative_regret,
                      stats.regret_se,  test_xs.rows(),     cfg.master_seed};
  out.ok = true;
  return out;
}

}  // namespace

RunResult run_replications(const ExperimentConfig& cfg) {
  if (cfg.experiment != "simple_example" && cfg.experiment != "shortest_path") {
    throw std::invalid_argument("run_replications handles simple_example and shortest_path");
  }
  if (cfg.methods.empty()) throw std::invalid_argument("no methods configured");

  const RngStream root = RngStream::from_seed(cfg.master_seed);
  ShortestPathDgp dgp;
  std::unique_ptr<GridDagSet> grid;
  if (cfg.experiment == "shortest_path") {
    dgp.coefficients = make_coefficient_matrix(cfg.coefficient_seed);
    grid = std::make_unique<GridDagSet>(5, 5);
  }

  std::vector<Task> tasks;
  tasks.reserve(cfg.methods.size() * cfg.n_grid.size() * cfg.replications);
  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
      for (int rep = 0; rep < cfg.replications; ++rep) tasks.push_back({mi, ni, rep});
    }
  }

  std::vector<TaskOutcome> outcomes(tasks.size());
  const auto worker_body = [&](std::size_t task_index) {
    const Task& task = tasks[task_index];
    const MethodSpec& method = cfg.methods[task.method_index];
    const Eigen::Index n = cfg.n_grid[task.n_index];
    TaskOutcome& out = outcomes[task_index];
    try {
      out = cfg.experiment == "simple_example"
                ? run_simple_cell(cfg, method, n, task.replication, root)
                : run_shortest_path_cell(cfg, method, n, task.replication, root, dgp, *grid);
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
    }
  };

  unsigned thread_count = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
  thread_count = std::min<unsigned>(thread_count, tasks.size());
  if (thread_count <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) worker_body(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (unsigned t = 0; t < thread_count; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
          worker_body(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  RunResult result;
  result.rows.reserve(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& task = tasks[i];
    if (outcomes[i].ok) {
      result.rows.push_back(std::move(outcomes[i].row));
    } else {
      const MethodSpec& method = cfg.methods[task.method_index];
      result.failures.push_back({method.label(), cfg.n_grid[task.n_index], task.replication,
                                 outcomes[i].error});
    }
  }
  return result;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << kReportCsvHeader << "\n";
  for (const auto& row : rows) {
    out << row.method << "," << row.hypothesis << "," << row.n << "," << row.replication << ","
        << format_double(row.regret) << "," << format_double(row.relative_regret) << ","
        << format_double(row.regret_se) << "," << row.test_size << "," << row.seed << "\n";
  }
  return out.str();
}

std::vector<MethodSlope> slopes_from_rows(const std::vector<ReportRow>& rows) {
  // mean regret per (method, hypothesis, n), in first-appearance order
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::map<Eigen::Index, std::pair<double, int>>>
      sums;
  for (const auto& row : rows) {
    const auto key = std::make_pair(row.method, row.hypothesis);
    if (!sums.count(key)) order.push_back(key);
    auto& cell = sums[key][row.n];
    cell.first += row.regret;
    cell.second += 1;
  }
  std::vector<MethodSlope> slopes;
  for (const auto& key : order) {
    std::vector<std::pair<double, double>> points;
    for (const auto& [n, cell] : sums[key]) {
      points.emplace_back(static_cast<double>(n), cell.first / cell.second);
    }
    try {
      slopes.push_back({key.first, key.second, fit_loglog_slope(points)});
    } catch (const std::invalid_argument&) {
      // fewer than three positive mean-regret points; nothing to fit
    }
  }
  return slopes;
}

std::string slopes_csv(const std::vector<MethodSlope>& slopes) {
  std::ostringstream out;
  out << "method,hypothesis,slope,intercept,r_squared,points_used\n";
  for (const auto& s : slopes) {
    out << s.method << "," << s.hypothesis << "," << format_double(s.fit.slope) << ","
        << format_double(s.fit.intercept) << "," << format_double(s.fit.r_squared) << ","
        << s.fit.points_used << "\n";
  }
  return out.str();
}

std::vector<ReportRow> read_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report file: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kReportCsvHeader) {
    throw std::invalid_argument("unexpected report header in " + path);
  }
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) throw std::invalid_argument("bad report row in " + path);
    ReportRow row;
    row.method = cells[0];
    row.hypothesis = cells[1];
    row.n = std::stoll(cells[2]);
    row.replication = std::stoi(cells[3]);
    row.regret = std::stod(cells[4]);
    row.relative_regret = std::stod(cells[5]);
    row.regret_se = std::stod(cells[6]);
    row.test_size = std::stoll(cells[7]);
    row.seed = std::stoull(cells[8]);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file for writing: " + temp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("failed writing output file: " + temp.string());
  }
  fs::rename(temp, target);
}

OracleCheckReport run_oracle_check(std::uint64_t seed) {
  OracleCheckReport report;
  RngStream stream = RngStream::from_seed(seed).derive(0xDA6);
  for (int width = 2; width <= 4; ++width) {
    for (int height = 2; height <= 4; ++height) {
      const GridDagSet grid(width, height);
      const auto paths = grid.extreme_points();
      for (int trial = 0; trial < 200; ++trial) {
        Eigen::VectorXd cost(grid.dim());
        for (int j = 0; j < grid.dim(); ++j) cost[j] = stream.uniform(-1.0, 1.0);

        // Enumeration reference: recover each path's edge sequence by
        // walking the grid, fold costs back-to-front along the path,
        // first strict minimum wins, band semantics for the gap.
        double best = std::numeric_limits<double>::infinity();
        Eigen::VectorXd best_z;
        std::vector<double> values;
        values.reserve(paths.size());
        for (const auto& z : paths) {
          std::vector<int> edges;
          int r = 0, c = 0;
          while (r != height - 1 || c != width - 1) {
            if (c + 1 < width && z[grid.right_edge_index(r, c)] != 0.0) {
              edges.push_back(grid.right_edge_index(r, c));
              ++c;
            } else {
              edges.push_back(grid.down_edge_index(r, c));
              ++r;
            }
          }
          double v = 0.0;
          for (auto it = edges.rbegin(); it != edges.rend(); ++it) v = cost[*it] + v;
          values.push_back(v);
          if (v < best) {
            best = v;
            best_z = z;
          }
        }
        const double tol = tie_tolerance_scale(cost, kDefaultTieTol);
        double above = std::numeric_limits<double>::infinity();
        std::int64_t within = 0;
        for (double v : values) {
          if (v <= best + tol) {
            ++within;
          } else {
            above = std::min(above, v);
          }
        }

        const OracleResult solved = grid.solve(cost);
        const MarginGap gap = grid.margin_gap(cost);
        ++report.checks;
        std::ostringstream msg;
        if (solved.value != best) {
          msg << "value mismatch on " << width << "x" << height << " trial " << trial;
        } else if (solved.argmin != best_z) {
          msg << "argmin mismatch on " << width << "x" << height << " trial " << trial;
        } else if (gap.zero_degenerate || gap.delta != above - best ||
                   gap.optima_count != within) {
          msg << "margin mismatch on " << width << "x" << height << " trial " << trial;
        }
        if (!msg.str().empty()) {
          ++report.failures;
          report.messages.push_back(msg.str());
        }
      }
    }
  }
  return report;
}

namespace {

bool methods_covered(const ExperimentConfig& cfg, const RunResult& result, std::ostream& log) {
  bool ok = true;
  std::map<std::pair<std::string, Eigen::Index>, int> successes;
  for (const auto& row : result.rows) {
    ++successes[{row.method + ":" + row.hypothesis, row.n}];
  }
  for (const auto& method : cfg.methods) {
    for (Eigen::Index n : cfg.n_grid) {
      if (!successes.count({method.label(), n})) {
        log << "error: no successful replication for " << method.label() << " at n = " << n
            << "\n";
        ok = false;
      }
    }
  }
  return ok;
}

nlohmann::json failure_counts(const ExperimentConfig& cfg, const RunResult& result) {
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& method : cfg.methods) counts[method.label()] = 0;
  for (const auto& failure : result.failures) {
    counts[failure.method] = counts.value(failure.method, 0) + 1;
  }
  return counts;
}

void write_manifest(const ExperimentConfig& cfg, const nlohmann::json& extra,
                    const nlohmann::json& timings) {
  nlohmann::json doc;
  doc["version"] = kLibraryVersion;
  doc["config"] = config_to_json(cfg);
  doc["timings_sec"] = timings;
  for (const auto& [key, value] : extra.items()) doc[key] = value;
  write_file_atomic(cfg.output_path + ".manifest.json", doc.dump(2) + "\n");
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  const auto started = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };
  try {
    if (cfg.experiment == "oracle_check") {
      const OracleCheckReport report = run_oracle_check(cfg.master_seed);
      std::ostringstream csv;
      csv << "check,status\n";
      csv << "grid_dp_vs_enumeration," << (report.failures == 0 ? "pass" : "fail") << "\n";
      write_file_atomic(cfg.output_path, csv.str());
      write_manifest(cfg, {{"checks", report.checks}, {"failures", report.failures}},
                     {{"total", elapsed()}});
      log << "oracle check: " << (report.checks - report.failures) << "/" << report.checks
          << " passed\n";
      for (const auto& m : report.messages) log << "  " << m << "\n";
      return report.failures == 0 ? 0 : 1;
    }

    if (cfg.experiment == "noise_profile") {
      const RngStream root = RngStream::from_seed(cfg.master_seed);
      const Eigen::MatrixXd xs = gen_simple_xs(cfg.test_size, root.derive(kTest, 0, 0));
      const IntervalSet interval;
      const NoiseProfile profile = noise_profile(
          interval, SimpleTruth{}, xs,
          cfg.delta_grid.empty() ? default_delta_grid() : cfg.delta_grid);
      std::ostringstream csv;
      csv << "delta,prob\n";
      for (std::size_t j = 0; j < profile.deltas.size(); ++j) {
        csv << format_double(profile.deltas[j]) << "," << format_double(profile.probs[j]) << "\n";
      }
      write_file_atomic(cfg.output_path, csv.str());
      write_manifest(cfg,
                     {{"alpha_hat", profile.alpha_defined ? nlohmann::json(profile.alpha_hat)
                                                          : nlohmann::json()},
                      {"alpha_defined", profile.alpha_defined},
                      {"radius", profile.radius}},
                     {{"total", elapsed()}});
      if (profile.alpha_defined) {
        log << "noise profile: alpha_hat = " << profile.alpha_hat << " (B = " << profile.radius
            << ")\n";
      } else {
        log << "noise profile: alpha undefined on this delta grid (B = " << profile.radius
            << ")\n";
      }
      return 0;
    }

    const RunResult result = run_replications(cfg);
    const double replications_sec = elapsed();
    write_file_atomic(cfg.output_path, report_csv(result.rows));
    const auto slopes = slopes_from_rows(result.rows);
    if (cfg.n_grid.size() >= 3 && !slopes.empty()) {
      write_file_atomic(cfg.output_path + ".slopes.csv", slopes_csv(slopes));
    }
    write_manifest(cfg,
                   {{"failures", failure_counts(cfg, result)},
                    {"rows_written", result.rows.size()}},
                   {{"replications", replications_sec},
                    {"postprocess", elapsed() - replications_sec},
                    {"total", elapsed()}});
    for (const auto& failure : result.failures) {
      log << "warning: " << failure.method << " n=" << failure.n << " rep=" << failure.replication
          << " failed: " << failure.message << "\n";
    }
    log << "wrote " << result.rows.size() << " rows to " << cfg.output_path << "\n";
    return methods_covered(cfg, result, log) ? 0 : 1;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace clobench
