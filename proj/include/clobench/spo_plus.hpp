#ifndef CLOBENCH_SPO_PLUS_HPP
#define CLOBENCH_SPO_PLUS_HPP

#include <Eigen/Dense>

#include <variant>
#include <vector>

#include "clobench/dataset.hpp"
#include "clobench/decision_set.hpp"
#include "clobench/estimators.hpp"
#include "clobench/feature_map.hpp"
#include "clobench/predictor.hpp"
#include "clobench/rng.hpp"

namespace clobench {

/**
 * Convex surrogate for the downstream decision cost of predicting c_hat
 * when the realized cost vector is c:
 *
 *   loss(c_hat, c) = max_z (c - 2 c_hat)^T z + 2 c_hat^T z*(c) - c^T z*(c)
 *
 * with z*(v) the set's linear-minimization oracle. Nonnegative, zero at
 * c_hat = c, convex and piecewise linear in c_hat.
 */
double spo_plus_loss(const Eigen::VectorXd& c_hat, const Eigen::VectorXd& c,
                     const DecisionSet& set);

/// Subgradient of spo_plus_loss in its first argument:
/// g = 2 (z*(c) - z*(2 c_hat - c)).
Eigen::VectorXd spo_plus_subgradient(const Eigen::VectorXd& c_hat, const Eigen::VectorXd& c,
                                     const DecisionSet& set);

struct SgdConfig {
  int batch_size = 10;
  int iterations = 1000;
  double step_scale = 1.0;  // step at iteration t (0-based) is step_scale / sqrt(t + 1)
  int trace_every = 0;      // record full-training objective every k steps (0 = off)
};

/// Hypothesis families the SGD trainer can optimize over.
struct LinearSpoFamily {
  FeatureMap feature_map;
  bool fit_intercept = true;
};
struct KernelSpoFamily {
  double rho = 1.0;
};
/// d = 1 offset class f(x) = x - theta, theta projected onto [-1, 1].
struct ThresholdSpoFamily {};

using SpoFamily = std::variant<LinearSpoFamily, KernelSpoFamily, ThresholdSpoFamily>;

/**
 * Minimizes (1/n) sum spo_plus_loss(f(X_i), Y_i) + lambda * penalty over
 * the family by mini-batch subgradient descent: parameters start at
 * zero, batches are drawn uniformly with replacement from the given
 * stream, and the final iterate is returned. Penalties: squared
 * Frobenius norm of the linear coefficients (intercept excluded),
 * squared RKHS norm for the kernel family, none for the offset class.
 * Deterministic given the stream.
 *
 * If objective_trace is non-null and cfg.trace_every > 0, the
 * full-training-set objective is appended after every trace_every steps.
 */
Predictor fit_spo_plus_sgd(const Dataset& data, const SpoFamily& family, const DecisionSet& set,
                           const RidgeConfig& ridge, const SgdConfig& cfg, RngStream stream,
                           std::vector<double>* objective_trace = nullptr);

/// Full-dataset SPO+ objective of a predictor, including the ridge term.
double spo_plus_objective(const Dataset& data, const Predictor& predictor,
                          const DecisionSet& set, double lambda_penalty);

}  // namespace clobench

#endif  // CLOBENCH_SPO_PLUS_HPP
