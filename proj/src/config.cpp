#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "clobench/harness.hpp"

namespace clobench {

using nlohmann::json;

const std::vector<Eigen::Index>& simple_rate_n_grid() {
  static const std::vector<Eigen::Index> grid{32,  40,  51,  64,  81,   102,  128,  161,  203, 256,
                                              323, 406, 512, 645, 813, 1024, 1290, 1625, 2048};
  return grid;
}

namespace {

const std::set<std::string> kExperiments{"simple_example", "shortest_path", "noise_profile",
                                         "oracle_check"};

[[noreturn]] void fail(const std::string& message) { throw std::invalid_argument(message); }

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail("unknown config key '" + key + "' in " + where);
  }
}

MethodSpec parse_method(const std::string& text, const std::string& experiment) {
  MethodSpec spec;
  const auto colon = text.find(':');
  spec.estimator = text.substr(0, colon);
  spec.hypothesis = colon == std::string::npos ? "" : text.substr(colon + 1);

  if (experiment == "simple_example") {
    static const std::set<std::string> ok{"eto", "ierm_left", "ierm_mid", "spo_plus", "truth"};
    if (!ok.count(spec.estimator)) fail("method '" + text + "' is not valid for simple_example");
    if (spec.estimator == "truth") {
      if (!spec.hypothesis.empty() && spec.hypothesis != "oracle") {
        fail("method '" + text + "': truth takes no hypothesis");
      }
      spec.hypothesis = "oracle";
    } else {
      if (!spec.hypothesis.empty() && spec.hypothesis != "threshold") {
        fail("method '" + text + "': simple_example methods use the threshold hypothesis");
      }
      spec.hypothesis = "threshold";
    }
    return spec;
  }
  if (experiment == "shortest_path") {
    if (spec.estimator == "truth") {
      if (!spec.hypothesis.empty() && spec.hypothesis != "oracle") {
        fail("method '" + text + "': truth takes no hypothesis");
      }
      spec.hypothesis = "oracle";
      return spec;
    }
    static const std::set<std::string> estimators{"eto", "spo_plus"};
    static const std::set<std::string> hypotheses{"correct_linear", "wrong_linear", "kernel"};
    if (!estimators.count(spec.estimator) || !hypotheses.count(spec.hypothesis)) {
      fail("method '" + text + "' is not valid for shortest_path (want estimator:hypothesis)");
    }
    return spec;
  }
  fail("experiment '" + experiment + "' takes no methods");
}

std::vector<double> number_list(const json& j, const std::string& name) {
  if (!j.is_array()) fail("config field '" + name + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) fail("config field '" + name + "' must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) fail("config must be a JSON object");
  check_keys(doc,
             {"experiment", "n_grid", "replications", "sigma2", "test_size", "methods", "grids",
              "sgd", "master_seed", "output_path", "threads", "eval_mode", "eval_grid_points",
              "wrong_linear_intercept", "coefficient_seed"},
             "config");

  ExperimentConfig cfg;
  if (!doc.contains("experiment")) fail("config field 'experiment' is required");
  cfg.experiment = doc.at("experiment").get<std::string>();
  if (!kExperiments.count(cfg.experiment)) fail("unknown experiment '" + cfg.experiment + "'");

  if (doc.contains("n_grid")) {
    for (const auto& v : doc.at("n_grid")) cfg.n_grid.push_back(v.get<Eigen::Index>());
  } else if (cfg.experiment == "simple_example") {
    cfg.n_grid = simple_rate_n_grid();
  } else if (cfg.experiment == "shortest_path") {
    for (Eigen::Index n = 50; n <= 1000; n += 50) cfg.n_grid.push_back(n);
  } else {
    cfg.n_grid = {1};
  }
  if (cfg.n_grid.empty()) fail("config field 'n_grid' must be nonempty");
  for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
    if (cfg.n_grid[i] < 1) fail("config field 'n_grid' entries must be positive");
    if (i > 0 && cfg.n_grid[i] <= cfg.n_grid[i - 1]) {
      fail("config field 'n_grid' must be strictly increasing");
    }
  }

  if (doc.contains("replications")) cfg.replications = doc.at("replications").get<int>();
  if (cfg.replications < 1) fail("config field 'replications' must be at least 1");

  if (doc.contains("sigma2")) cfg.sigma2 = doc.at("sigma2").get<double>();
  if (cfg.sigma2 < 0.0) fail("config field 'sigma2' must be nonnegative");

  if (doc.contains("test_size")) cfg.test_size = doc.at("test_size").get<Eigen::Index>();
  if (cfg.test_size < 1) fail("config field 'test_size' must be positive");

  if (doc.contains("methods")) {
    for (const auto& m : doc.at("methods")) {
      cfg.methods.push_back(parse_method(m.get<std::string>(), cfg.experiment));
    }
  } else if (cfg.experiment == "simple_example") {
    cfg.methods = {{"eto", "threshold"}, {"ierm_left", "threshold"}, {"ierm_mid", "threshold"}};
  } else if (cfg.experiment == "shortest_path") {
    cfg.methods = {{"eto", "correct_linear"},
                   {"eto", "wrong_linear"},
                   {"eto", "kernel"},
                   {"spo_plus", "wrong_linear"}};
  }

  cfg.grids.lambda_linear = default_lambda_linear_grid();
  cfg.grids.lambda_kernel = default_lambda_kernel_grid();
  cfg.grids.rho = default_rho_grid();
  cfg.delta_grid = default_delta_grid();
  if (doc.contains("grids")) {
    const auto& grids = doc.at("grids");
    check_keys(grids, {"lambda_linear", "lambda_kernel", "rho", "delta"}, "grids");
    if (grids.contains("lambda_linear")) {
      cfg.grids.lambda_linear = number_list(grids.at("lambda_linear"), "grids.lambda_linear");
    }
    if (grids.contains("lambda_kernel")) {
      cfg.grids.lambda_kernel = number_list(grids.at("lambda_kernel"), "grids.lambda_kernel");
    }
    if (grids.contains("rho")) cfg.grids.rho = number_list(grids.at("rho"), "grids.rho");
    if (grids.contains("delta")) cfg.delta_grid = number_list(grids.at("delta"), "grids.delta");
  }

  if (doc.contains("sgd")) {
    const auto& sgd = doc.at("sgd");
    check_keys(sgd, {"batch_size", "iterations", "step_scale"}, "sgd");
    if (sgd.contains("batch_size")) cfg.sgd.batch_size = sgd.at("batch_size").get<int>();
    if (sgd.contains("iterations")) cfg.sgd.iterations = sgd.at("iterations").get<int>();
    if (sgd.contains("step_scale")) cfg.sgd.step_scale = sgd.at("step_scale").get<double>();
    if (cfg.sgd.batch_size < 1) fail("config field 'sgd.batch_size' must be positive");
    if (cfg.sgd.iterations < 0) fail("config field 'sgd.iterations' must be nonnegative");
    if (!(cfg.sgd.step_scale > 0.0)) fail("config field 'sgd.step_scale' must be positive");
  }

  if (doc.contains("master_seed")) cfg.master_seed = doc.at("master_seed").get<std::uint64_t>();
  if (doc.contains("output_path")) cfg.output_path = doc.at("output_path").get<std::string>();
  if (cfg.output_path.empty()) fail("config field 'output_path' must be nonempty");
  if (doc.contains("threads")) cfg.threads = doc.at("threads").get<int>();
  if (cfg.threads < 0) fail("config field 'threads' must be nonnegative");

  if (doc.contains("eval_mode")) cfg.eval_mode = doc.at("eval_mode").get<std::string>();
  if (cfg.eval_mode == "default") {
    cfg.eval_mode = cfg.experiment == "simple_example" ? "grid" : "sample";
  }
  static const std::set<std::string> kEvalModes{"grid", "exact", "sample"};
  if (!kEvalModes.count(cfg.eval_mode)) fail("unknown eval_mode '" + cfg.eval_mode + "'");
  if (cfg.experiment == "shortest_path" && cfg.eval_mode != "sample") {
    fail("shortest_path supports only eval_mode 'sample'");
  }

  if (doc.contains("eval_grid_points")) {
    cfg.eval_grid_points = doc.at("eval_grid_points").get<Eigen::Index>();
  }
  if (cfg.eval_grid_points < 2) fail("config field 'eval_grid_points' must be at least 2");

  if (doc.contains("wrong_linear_intercept")) {
    cfg.wrong_linear_intercept = doc.at("wrong_linear_intercept").get<bool>();
  }
  if (doc.contains("coefficient_seed")) {
    cfg.coefficient_seed = doc.at("coefficient_seed").get<std::uint64_t>();
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json doc = json::parse(in);
  return parse_config(doc);
}

json config_to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["experiment"] = cfg.experiment;
  doc["n_grid"] = cfg.n_grid;
  doc["replications"] = cfg.replications;
  doc["sigma2"] = cfg.sigma2;
  doc["test_size"] = cfg.test_size;
  json methods = json::array();
  for (const auto& m : cfg.methods) {
    methods.push_back(m.estimator == "truth" ? m.estimator : m.estimator + ":" + m.hypothesis);
  }
  doc["methods"] = std::move(methods);
  doc["grids"] = {{"lambda_linear", cfg.grids.lambda_linear},
                  {"lambda_kernel", cfg.grids.lambda_kernel},
                  {"rho", cfg.grids.rho},
                  {"delta", cfg.delta_grid}};
  doc["sgd"] = {{"batch_size", cfg.sgd.batch_size},
                {"iterations", cfg.sgd.iterations},
                {"step_scale", cfg.sgd.step_scale}};
  doc["master_seed"] = cfg.master_seed;
  doc["output_path"] = cfg.output_path;
  doc["threads"] = cfg.threads;
  doc["eval_mode"] = cfg.eval_mode;
  doc["eval_grid_points"] = cfg.eval_grid_points;
  doc["wrong_linear_intercept"] = cfg.wrong_linear_intercept;
  doc["coefficient_seed"] = cfg.coefficient_seed;
  return doc;
}

}  // namespace clobench
