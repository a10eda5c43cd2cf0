#include "clobench/predictor.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace clobench {

using nlohmann::json;

double gaussian_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double rho) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("gaussian_kernel inputs must have equal dimensions");
  }
  if (!(rho > 0.0)) throw std::invalid_argument("gaussian_kernel rho must be positive");
  return std::exp(-rho * (x - y).squaredNorm());
}

Eigen::MatrixXd gaussian_gram(const Eigen::MatrixXd& xs, double rho) {
  return gaussian_cross(xs, xs, rho);
}

Eigen::MatrixXd gaussian_cross(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double rho) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("gaussian_cross inputs must have equal dimensions");
  }
  if (!(rho > 0.0)) throw std::invalid_argument("gaussian_cross rho must be positive");
  Eigen::MatrixXd out(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      out(i, j) = std::exp(-rho * (a.row(i) - b.row(j)).squaredNorm());
    }
  }
  return out;
}

Eigen::VectorXd LinearPredictor::predict(const Eigen::VectorXd& x) const {
  return coefficients * feature_map(x) + intercept;
}

Eigen::VectorXd KernelPredictor::predict(const Eigen::VectorXd& x) const {
  if (x.size() != support_points.cols()) {
    throw std::invalid_argument("kernel predictor expects input dimension " +
                                std::to_string(support_points.cols()));
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dual_coefficients.cols());
  for (Eigen::Index i = 0; i < support_points.rows(); ++i) {
    const double k = std::exp(-rho * (x - support_points.row(i).transpose()).squaredNorm());
    out += k * dual_coefficients.row(i).transpose();
  }
  return out;
}

Eigen::VectorXd predict(const Predictor& predictor, const Eigen::VectorXd& x) {
  return std::visit([&](const auto& p) { return p.predict(x); }, predictor);
}

PredictFn as_predict_fn(const Predictor& predictor) {
  return [predictor](const Eigen::VectorXd& x) { return predict(predictor, x); };
}

LinearPredictor threshold_predictor(double theta) {
  LinearPredictor p{Eigen::MatrixXd::Constant(1, 1, 1.0),
                    Eigen::VectorXd::Constant(1, -theta), FeatureMap::identity(1)};
  return p;
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.size();
  if (rows == 0) return Eigen::MatrixXd(0, 0);
  const auto cols = j.at(0).size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j.at(i).size() != cols) throw std::invalid_argument("ragged matrix in predictor file");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  }
  return m;
}

}  // namespace

void save_predictor(const Predictor& predictor, const std::string& path) {
  json doc;
  if (const auto* lin = std::get_if<LinearPredictor>(&predictor)) {
    doc["kind"] = "linear";
    doc["feature_map"] = lin->feature_map.kind_name();
    doc["input_dim"] = lin->input_dim();
    doc["output_dim"] = lin->output_dim();
    doc["coefficients"] = matrix_to_json(lin->coefficients);
    json b = json::array();
    for (Eigen::Index i = 0; i < lin->intercept.size(); ++i) b.push_back(lin->intercept[i]);
    doc["intercept"] = std::move(b);
  } else {
    const auto& ker = std::get<KernelPredictor>(predictor);
    doc["kind"] = "kernel";
    doc["rho"] = ker.rho;
    doc["input_dim"] = ker.input_dim();
    doc["output_dim"] = ker.output_dim();
    doc["support_points"] = matrix_to_json(ker.support_points);
    doc["dual_coefficients"] = matrix_to_json(ker.dual_coefficients);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open predictor file for writing: " + path);
  out << doc.dump(2) << "\n";
}

Predictor load_predictor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open predictor file: " + path);
  json doc = json::parse(in);
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "linear") {
    LinearPredictor lin{matrix_from_json(doc.at("coefficients")), Eigen::VectorXd(),
                        FeatureMap::from_name(doc.at("feature_map").get<std::string>(),
                                              doc.at("input_dim").get<int>())};
    const auto& b = doc.at("intercept");
    lin.intercept.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) lin.intercept[i] = b.at(i).get<double>();
    return lin;
  }
  if (kind == "kernel") {
    KernelPredictor ker{matrix_from_json(doc.at("support_points")),
                        matrix_from_json(doc.at("dual_coefficients")),
                        doc.at("rho").get<double>()};
    return ker;
  }
  throw std::invalid_argument("unknown predictor kind: " + kind);
}

}  // namespace clobench
