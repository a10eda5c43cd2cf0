#ifndef CLOBENCH_EVALUATION_HPP
#define CLOBENCH_EVALUATION_HPP

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "clobench/dataset.hpp"
#include "clobench/decision_set.hpp"
#include "clobench/feature_map.hpp"
#include "clobench/predictor.hpp"
#include "clobench/rng.hpp"
#include "clobench/spo_plus.hpp"

namespace clobench {

/// Decision-cost comparison of a fitted predictor against the oracle
/// policy on a set of evaluation points.
struct RegretStats {
  double regret = 0.0;           // mean of truth(x)^T (pi_fhat(x) - pi_truth(x))
  double regret_se = 0.0;        // standard error of that mean (0 for a single point)
  double relative_regret = 0.0;  // regret / mean optimal cost
  double optimal_cost = 0.0;     // mean of truth(x)^T pi_truth(x)
};

/// Both policies go through the set's linear-minimization oracle, so a
/// predictor equal to the truth has regret exactly zero.
RegretStats policy_regret(const PredictFn& f_hat, const PredictFn& truth,
                          const DecisionSet& set, const Eigen::MatrixXd& test_xs);

/// Closed-form regret of the location-model plug-in on the univariate
/// example: sigma^2 / (2n).
double eto_regret_exact_simple(Eigen::Index n, double sigma2);

/// Closed-form regret of the noiseless threshold empirical risk
/// minimizer (left endpoint rule): (4 - (3+n) 2^{-n}) / ((n+1)(n+2)).
double ierm_regret_exact_noiseless(Eigen::Index n);

/// Exact X-average regret of the threshold policy pi_theta on the
/// univariate example: min(|theta|, 1)^2 / 2.
double exact_threshold_regret(double theta);

/// Mean optimal cost of the univariate example, E[X pi*(X)] = -1/2.
inline constexpr double kSimpleOptimalCost = -0.5;

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
};

/// Ordinary least squares of log(regret) on log(n). Points with
/// nonpositive regret are dropped (counted via points_used); fewer than
/// three usable points is an error.
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

/// Empirical margin distribution under a truth function: for each delta,
/// the fraction of sample points with 0 < margin <= delta, and a log-log
/// slope fitted over the window of probabilities in (0.01, 0.5).
struct NoiseProfile {
  std::vector<double> deltas;
  std::vector<double> probs;
  double alpha_hat = 0.0;
  bool alpha_defined = false;
  double radius = 0.0;  // decision radius B used for normalization
};

NoiseProfile noise_profile(const DecisionSet& set, const PredictFn& truth,
                           const Eigen::MatrixXd& xs, const std::vector<double>& delta_grid);

// ---------------------------------------------------------------------------
// Hyperparameter selection on a held-out validation set.

enum class ValidationCriterion { mse, decision_cost };

struct MethodSpec {
  std::string estimator;   // eto | spo_plus | ierm_left | ierm_mid | truth
  std::string hypothesis;  // threshold | correct_linear | wrong_linear | kernel | oracle
  std::string label() const { return estimator + ":" + hypothesis; }
};

struct HyperGrids {
  std::vector<double> lambda_linear;
  std::vector<double> lambda_kernel;
  std::vector<double> rho;
};

/// Appendix-style default grids: {0} plus ten third-of-a-decade steps
/// from 0.1 to 100 for the linear family; {1e-3, 1e-2} plus the same
/// positive ladder without 0 for the kernel family; rho in
/// {0.01, 0.1, 0.5, 1, 2}.
std::vector<double> default_lambda_linear_grid();
std::vector<double> default_lambda_kernel_grid();
std::vector<double> default_rho_grid();

/// 30 log-spaced margin thresholds from 0.01 to 2.
std::vector<double> default_delta_grid();

struct CandidateScore {
  double lambda = 0.0;
  double rho = 0.0;  // 0 for families without a kernel parameter
  double score = 0.0;
};

struct ValidationChoice {
  std::size_t index = 0;  // into table; ties keep the first entry
  ValidationCriterion criterion = ValidationCriterion::mse;
  std::vector<CandidateScore> table;
  Predictor predictor;  // refit on train at the chosen configuration
};

/**
 * Fits the method on train for every grid configuration, scores each fit
 * on the validation set (mean squared prediction error for regression
 * methods, mean realized decision cost for SPO+), and returns the first
 * minimizer in grid order. Grid order is lambda-major, rho-minor.
 */
ValidationChoice select_hyperparams(const Dataset& train, const Dataset& val,
                                    const MethodSpec& method, const HyperGrids& grids,
                                    const DecisionSet& set, const SgdConfig& sgd,
                                    RngStream sgd_stream, bool linear_intercept = true);

}  // namespace clobench

#endif  // CLOBENCH_EVALUATION_HPP
