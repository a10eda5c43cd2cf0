#ifndef CLOBENCH_PREDICTOR_HPP
#define CLOBENCH_PREDICTOR_HPP

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <variant>

#include "clobench/feature_map.hpp"

namespace clobench {

/// exp(-rho * |x - y|^2). rho must be positive, dimensions equal.
double gaussian_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double rho);

/// Gram matrix K(x_i, x_j) for rows of xs.
Eigen::MatrixXd gaussian_gram(const Eigen::MatrixXd& xs, double rho);

/// Cross-kernel matrix K(a_i, b_j) for rows of a and b.
Eigen::MatrixXd gaussian_cross(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double rho);

/// f(x) = W phi(x) + intercept.
struct LinearPredictor {
  Eigen::MatrixXd coefficients;  // d x output_dim(feature_map)
  Eigen::VectorXd intercept;     // d (zero when absent)
  FeatureMap feature_map;

  Eigen::VectorXd predict(const Eigen::VectorXd& x) const;
  int input_dim() const { return feature_map.input_dim(); }
  int output_dim() const { return static_cast<int>(coefficients.rows()); }
};

/// f(x) = sum_i K(x, X_i) alpha_i with alpha_i the i-th row of dual_coefficients.
struct KernelPredictor {
  Eigen::MatrixXd support_points;     // n x p
  Eigen::MatrixXd dual_coefficients;  // n x d
  double rho = 1.0;

  Eigen::VectorXd predict(const Eigen::VectorXd& x) const;
  int input_dim() const { return static_cast<int>(support_points.cols()); }
  int output_dim() const { return static_cast<int>(dual_coefficients.cols()); }
};

using Predictor = std::variant<LinearPredictor, KernelPredictor>;

Eigen::VectorXd predict(const Predictor& predictor, const Eigen::VectorXd& x);

using PredictFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Wrap a predictor as a callable for evaluation code.
PredictFn as_predict_fn(const Predictor& predictor);

/// d = 1 threshold model f(x) = x - theta over identity features.
LinearPredictor threshold_predictor(double theta);

/// Plain-text JSON round trip for reuse across runs (schema in README).
void save_predictor(const Predictor& predictor, const std::string& path);
Predictor load_predictor(const std::string& path);

}  // namespace clobench

#endif  // CLOBENCH_PREDICTOR_HPP
