#ifndef CLOBENCH_ESTIMATORS_HPP
#define CLOBENCH_ESTIMATORS_HPP

#include <Eigen/Dense>

#include "clobench/dataset.hpp"
#include "clobench/feature_map.hpp"
#include "clobench/predictor.hpp"

namespace clobench {

struct RidgeConfig {
  double lambda = 0.0;  // penalty weight, >= 0
};

/**
 * Exact minimizer of  (1/n) sum |Y_i - W phi(X_i) - b|^2 + lambda |W|_F^2
 * via the normal equations (the intercept is unpenalized; drop it with
 * fit_intercept = false). For lambda = 0 on a rank-deficient design the
 * minimum-norm least-squares solution is returned.
 */
LinearPredictor fit_least_squares_ridge(const Dataset& data, const FeatureMap& fmap,
                                        const RidgeConfig& cfg, bool fit_intercept = true);

/**
 * Gaussian-kernel ridge regression: dual coefficients
 * A = (G + n lambda I)^{-1} Y with G the training Gram matrix, the
 * minimizer of (1/n) sum |Y_i - f(X_i)|^2 + lambda |f|_K^2.
 * lambda must be strictly positive.
 */
KernelPredictor fit_kernel_ridge(const Dataset& data, double rho, const RidgeConfig& cfg);

/// Location fit for the d = 1 offset class f(x) = x - theta:
/// theta_hat = mean(X) - mean(Y).
double fit_threshold_ols(const Dataset& data);

enum class ThresholdRule { left_endpoint, midpoint };

struct ThresholdClassFit {
  double theta = 0.0;  // in [-1, 1]
  ThresholdRule rule = ThresholdRule::left_endpoint;
};

/**
 * Exact empirical risk minimizer over threshold policies
 * pi_theta(x) = 2 * 1{x <= theta} - 1 on Z = [-1, 1]. The empirical
 * objective (1/n) sum Y_i pi_theta(X_i) is piecewise constant with
 * breakpoints at the X_i; the leftmost minimizing interval is selected
 * and reported by its left endpoint or midpoint.
 */
ThresholdClassFit fit_ierm_threshold(const Dataset& data, ThresholdRule rule);

}  // namespace clobench

#endif  // CLOBENCH_ESTIMATORS_HPP
