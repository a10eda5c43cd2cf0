#include "clobench/estimators.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace clobench {

LinearPredictor fit_least_squares_ridge(const Dataset& data, const FeatureMap& fmap,
                                        const RidgeConfig& cfg, bool fit_intercept) {
  data.validate();
  if (cfg.lambda < 0.0) throw std::invalid_argument("ridge lambda must be nonnegative");
  if (data.feature_dim() != fmap.input_dim()) {
    throw std::invalid_argument("feature map input dimension does not match data");
  }
  const Eigen::Index n = data.size();
  const int pp = fmap.output_dim();
  const int cols = pp + (fit_intercept ? 1 : 0);
  Eigen::MatrixXd design(n, cols);
  design.leftCols(pp) = fmap.apply_rows(data.xs);
  if (fit_intercept) design.col(pp).setOnes();

  Eigen::MatrixXd theta(cols, data.target_dim());
  if (cfg.lambda > 0.0) {
    Eigen::MatrixXd normal = design.transpose() * design / static_cast<double>(n);
    for (int j = 0; j < pp; ++j) normal(j, j) += cfg.lambda;  // intercept unpenalized
    const Eigen::MatrixXd rhs = design.transpose() * data.ys / static_cast<double>(n);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    if (ldlt.info() != Eigen::Success) {
      throw std::runtime_error("ridge normal equations factorization failed");
    }
    theta = ldlt.solve(rhs);
  } else {
    // Minimum-norm least squares, robust to rank deficiency.
    theta = design.completeOrthogonalDecomposition().solve(data.ys);
  }

  LinearPredictor fit{theta.topRows(pp).transpose(), Eigen::VectorXd::Zero(data.target_dim()),
                      fmap};
  if (fit_intercept) fit.intercept = theta.row(pp).transpose();
  return fit;
}

KernelPredictor fit_kernel_ridge(const Dataset& data, double rho, const RidgeConfig& cfg) {
  data.validate();
  if (!(cfg.lambda > 0.0)) {
    throw std::invalid_argument("kernel ridge requires a strictly positive lambda");
  }
  const Eigen::Index n = data.size();
  Eigen::MatrixXd system = gaussian_gram(data.xs, rho);
  system.diagonal().array() += static_cast<double>(n) * cfg.lambda;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
  if (ldlt.info() != Eigen::Success) {
    throw std::runtime_error("kernel ridge system factorization failed");
  }
  return KernelPredictor{data.xs, ldlt.solve(data.ys), rho};
}

double fit_threshold_ols(const Dataset& data) {
  data.validate();
  if (data.feature_dim() != 1 || data.target_dim() != 1) {
    throw std::invalid_argument("threshold fits require univariate data");
  }
  return data.xs.col(0).mean() - data.ys.col(0).mean();
}

ThresholdClassFit fit_ierm_threshold(const Dataset& data, ThresholdRule rule) {
  data.validate();
  if (data.feature_dim() != 1 || data.target_dim() != 1) {
    throw std::invalid_argument("threshold fits require univariate data");
  }
  const Eigen::Index n = data.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return data.xs(a, 0) < data.xs(b, 0);
  });

  // Candidate left endpoints: -1, then each distinct sorted X value.
  // The objective on piece k is (2 * prefix_k - total) / n where
  // prefix_k sums Y over X <= candidate k.
  std::vector<double> candidates{-1.0};
  std::vector<double> values;
  const double total = data.ys.col(0).sum();
  values.push_back(-total / static_cast<double>(n));
  double prefix = 0.0;
  Eigen::Index i = 0;
  while (i < n) {
    const double x = data.xs(order[i], 0);
    while (i < n && data.xs(order[i], 0) == x) {
      prefix += data.ys(order[i], 0);
      ++i;
    }
    candidates.push_back(x);
    values.push_back((2.0 * prefix - total) / static_cast<double>(n));
  }

  const double best = *std::min_element(values.begin(), values.end());
  std::size_t run_start = 0;
  while (values[run_start] != best) ++run_start;
  std::size_t run_end = run_start;  // last piece of the leftmost minimizing run
  while (run_end + 1 < values.size() && values[run_end + 1] == best) ++run_end;

  ThresholdClassFit fit;
  fit.rule = rule;
  const double left = candidates[run_start];
  const double right = run_end + 1 < candidates.size() ? candidates[run_end + 1] : 1.0;
  fit.theta = rule == ThresholdRule::left_endpoint ? left : 0.5 * (left + right);
  return fit;
}

}  // namespace clobench
