#include "clobench/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "clobench/estimators.hpp"

namespace clobench {

RegretStats policy_regret(const PredictFn& f_hat, const PredictFn& truth,
                          const DecisionSet& set, const Eigen::MatrixXd& test_xs) {
  if (test_xs.rows() < 1) throw std::invalid_argument("test set is empty");
  const Eigen::Index m = test_xs.rows();
  double gap_sum = 0.0, gap_sq_sum = 0.0, opt_sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::VectorXd x = test_xs.row(i).transpose();
    const Eigen::VectorXd c_star = truth(x);
    const Eigen::VectorXd z_star = set.solve(c_star).argmin;
    const Eigen::VectorXd z_hat = set.solve(f_hat(x)).argmin;
    const double gap = c_star.dot(z_hat - z_star);
    gap_sum += gap;
    gap_sq_sum += gap * gap;
    opt_sum += c_star.dot(z_star);
  }
  RegretStats stats;
  const double dm = static_cast<double>(m);
  stats.regret = gap_sum / dm;
  stats.optimal_cost = opt_sum / dm;
  if (m > 1) {
    const double var = std::max(0.0, (gap_sq_sum - dm * stats.regret * stats.regret) / (dm - 1.0));
    stats.regret_se = std::sqrt(var / dm);
  }
  stats.relative_regret = stats.optimal_cost != 0.0 ? stats.regret / stats.optimal_cost
                                                    : std::numeric_limits<double>::quiet_NaN();
  return stats;
}

double eto_regret_exact_simple(Eigen::Index n, double sigma2) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (sigma2 < 0.0) throw std::invalid_argument("sigma2 must be nonnegative");
  return sigma2 / (2.0 * static_cast<double>(n));
}

double ierm_regret_exact_noiseless(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  const double nd = static_cast<double>(n);
  return (4.0 - std::ldexp(3.0 + nd, -static_cast<int>(std::min<Eigen::Index>(n, 4000)))) /
         ((nd + 1.0) * (nd + 2.0));
}

double exact_threshold_regret(double theta) {
  const double t = std::min(std::abs(theta), 1.0);
  return 0.5 * t * t;
}

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  std::vector<std::pair<double, double>> logs;
  for (const auto& [n, regret] : points) {
    if (n <= 0.0) throw std::invalid_argument("sample sizes must be positive");
    if (regret > 0.0) logs.emplace_back(std::log(n), std::log(regret));
  }
  if (logs.size() < 3) {
    throw std::invalid_argument("log-log fit needs at least three positive-regret points");
  }
  const double m = static_cast<double>(logs.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : logs) {
    sx += x;
    sy += y;
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : logs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  SlopeFit fit;
  fit.points_used = static_cast<int>(logs.size());
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

NoiseProfile noise_profile(const DecisionSet& set, const PredictFn& truth,
                           const Eigen::MatrixXd& xs, const std::vector<double>& delta_grid) {
  if (xs.rows() < 1) throw std::invalid_argument("noise profile needs a nonempty sample");
  if (delta_grid.empty()) throw std::invalid_argument("noise profile needs a delta grid");
  std::vector<double> margins;  // strictly positive margins only
  margins.reserve(xs.rows());
  for (Eigen::Index i = 0; i < xs.rows(); ++i) {
    const MarginGap gap = set.margin_gap(truth(xs.row(i).transpose()));
    if (!gap.zero_degenerate) margins.push_back(gap.delta);
  }
  std::sort(margins.begin(), margins.end());

  NoiseProfile profile;
  profile.radius = set.radius();
  profile.deltas = delta_grid;
  profile.probs.reserve(delta_grid.size());
  const double total = static_cast<double>(xs.rows());
  for (double delta : delta_grid) {
    const auto upper = std::upper_bound(margins.begin(), margins.end(), delta);
    profile.probs.push_back(static_cast<double>(upper - margins.begin()) / total);
  }

  std::vector<std::pair<double, double>> window;
  for (std::size_t j = 0; j < delta_grid.size(); ++j) {
    if (profile.probs[j] > 0.01 && profile.probs[j] < 0.5) {
      window.emplace_back(delta_grid[j], profile.probs[j]);
    }
  }
  if (window.size() >= 3) {
    const SlopeFit fit = fit_loglog_slope(window);
    profile.alpha_hat = fit.slope;
    profile.alpha_defined = true;
  } else {
    profile.alpha_hat = std::numeric_limits<double>::quiet_NaN();
    profile.alpha_defined = false;
  }
  return profile;
}

// ---------------------------------------------------------------------------
// Hyperparameter selection

std::vector<double> default_lambda_linear_grid() {
  std::vector<double> grid{0.0};
  for (int k = -3; k <= 6; ++k) grid.push_back(std::pow(10.0, k / 3.0));
  return grid;
}

std::vector<double> default_lambda_kernel_grid() {
  std::vector<double> grid{1e-3, 1e-2};
  for (int k = -3; k <= 6; ++k) grid.push_back(std::pow(10.0, k / 3.0));
  return grid;
}

std::vector<double> default_rho_grid() { return {0.01, 0.1, 0.5, 1.0, 2.0}; }

std::vector<double> default_delta_grid() {
  std::vector<double> grid;
  const double ratio = std::pow(200.0, 1.0 / 29.0);
  for (double delta = 0.01; delta <= 2.0 + 1e-12; delta *= ratio) grid.push_back(delta);
  return grid;
}

namespace {

double validation_mse(const Predictor& predictor, const Dataset& val) {
  const auto fn = as_predict_fn(predictor);
  double total = 0.0;
  for (Eigen::Index i = 0; i < val.size(); ++i) {
    total += (val.ys.row(i).transpose() - fn(val.xs.row(i).transpose())).squaredNorm();
  }
  return total / static_cast<double>(val.size());
}

double validation_decision_cost(const Predictor& predictor, const Dataset& val,
                                const DecisionSet& set) {
  const auto fn = as_predict_fn(predictor);
  double total = 0.0;
  for (Eigen::Index i = 0; i < val.size(); ++i) {
    const Eigen::VectorXd z = set.solve(fn(val.xs.row(i).transpose())).argmin;
    total += val.ys.row(i).dot(z);
  }
  return total / static_cast<double>(val.size());
}

}  // namespace

ValidationChoice select_hyperparams(const Dataset& train, const Dataset& val,
                                    const MethodSpec& method, const HyperGrids& grids,
                                    const DecisionSet& set, const SgdConfig& sgd,
                                    RngStream sgd_stream, bool linear_intercept) {
  train.validate();
  val.validate();
  const bool is_spo = method.estimator == "spo_plus";
  const bool is_kernel = method.hypothesis == "kernel";
  const std::vector<double>& lambdas = is_kernel ? grids.lambda_kernel : grids.lambda_linear;
  const std::vector<double> rhos = is_kernel ? grids.rho : std::vector<double>{0.0};
  if (lambdas.empty() || rhos.empty()) {
    throw std::invalid_argument("hyperparameter grid is empty for method " + method.label());
  }

  FeatureMap fmap = method.hypothesis == "correct_linear"
                        ? FeatureMap::monomial_products(train.feature_dim())
                        : FeatureMap::identity(train.feature_dim());

  ValidationChoice choice;
  choice.criterion = is_spo ? ValidationCriterion::decision_cost : ValidationCriterion::mse;
  double best_score = std::numeric_limits<double>::infinity();
  std::size_t flat_index = 0;
  for (std::size_t li = 0; li < lambdas.size(); ++li) {
    for (std::size_t ri = 0; ri < rhos.size(); ++ri, ++flat_index) {
      const RidgeConfig ridge{lambdas[li]};
      Predictor fitted = [&]() -> Predictor {
        if (is_spo) {
          SpoFamily family = is_kernel
                                 ? SpoFamily(KernelSpoFamily{rhos[ri]})
                                 : SpoFamily(LinearSpoFamily{fmap, linear_intercept});
          return fit_spo_plus_sgd(train, family, set, ridge, sgd,
                                  sgd_stream.derive(li, ri));
        }
        if (is_kernel) return fit_kernel_ridge(train, rhos[ri], ridge);
        return fit_least_squares_ridge(train, fmap, ridge, linear_intercept);
      }();
      const double score = is_spo ? validation_decision_cost(fitted, val, set)
                                  : validation_mse(fitted, val);
      choice.table.push_back({lambdas[li], rhos[ri], score});
      if (score < best_score) {
        best_score = score;
        choice.index = flat_index;
        choice.predictor = std::move(fitted);
      }
    }
  }
  return choice;
}

}  // namespace clobench
