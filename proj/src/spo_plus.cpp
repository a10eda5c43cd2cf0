#include "clobench/spo_plus.hpp"

#include <cmath>
#include <stdexcept>

namespace clobench {

double spo_plus_loss(const Eigen::VectorXd& c_hat, const Eigen::VectorXd& c,
                     const DecisionSet& set) {
  if (c_hat.size() != c.size()) {
    throw std::invalid_argument("spo_plus_loss arguments must have equal dimensions");
  }
  const OracleResult at_c = set.solve(c);
  const double max_term = -set.solve(2.0 * c_hat - c).value;
  return max_term + 2.0 * c_hat.dot(at_c.argmin) - c.dot(at_c.argmin);
}

Eigen::VectorXd spo_plus_subgradient(const Eigen::VectorXd& c_hat, const Eigen::VectorXd& c,
                                     const DecisionSet& set) {
  if (c_hat.size() != c.size()) {
    throw std::invalid_argument("spo_plus_subgradient arguments must have equal dimensions");
  }
  return 2.0 * (set.solve(c).argmin - set.solve(2.0 * c_hat - c).argmin);
}

namespace {

void check_sgd_inputs(const Dataset& data, const DecisionSet& set, const RidgeConfig& ridge,
                      const SgdConfig& cfg) {
  data.validate();
  if (data.target_dim() != set.dim()) {
    throw std::invalid_argument("dataset target dimension does not match decision set");
  }
  if (cfg.batch_size < 1) throw std::invalid_argument("batch_size must be positive");
  if (cfg.iterations < 0) throw std::invalid_argument("iterations must be nonnegative");
  if (ridge.lambda < 0.0) throw std::invalid_argument("ridge lambda must be nonnegative");
}

// Oracle decisions for every realized cost vector; fixed across iterations.
std::vector<Eigen::VectorXd> realized_decisions(const Dataset& data, const DecisionSet& set) {
  std::vector<Eigen::VectorXd> zs;
  zs.reserve(data.size());
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    zs.push_back(set.solve(data.ys.row(i).transpose()).argmin);
  }
  return zs;
}

double mean_spo_loss(const Dataset& data, const DecisionSet& set,
                     const std::vector<Eigen::VectorXd>& z_realized,
                     const std::function<Eigen::VectorXd(Eigen::Index)>& predict_row) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const Eigen::VectorXd c = data.ys.row(i).transpose();
    const Eigen::VectorXd c_hat = predict_row(i);
    total += -set.solve(2.0 * c_hat - c).value + 2.0 * c_hat.dot(z_realized[i]) -
             c.dot(z_realized[i]);
  }
  return total / static_cast<double>(data.size());
}

}  // namespace

Predictor fit_spo_plus_sgd(const Dataset& data, const SpoFamily& family, const DecisionSet& set,
                           const RidgeConfig& ridge, const SgdConfig& cfg, RngStream stream,
                           std::vector<double>* objective_trace) {
  check_sgd_inputs(data, set, ridge, cfg);
  const Eigen::Index n = data.size();
  const int d = set.dim();
  const auto z_realized = realized_decisions(data, set);

  const auto maybe_trace = [&](int t, const std::function<double()>& objective) {
    if (objective_trace && cfg.trace_every > 0 && (t + 1) % cfg.trace_every == 0) {
      objective_trace->push_back(objective());
    }
  };

  // The ridge term is handled by its proximal map after each loss step
  // (forward-backward splitting): an explicit gradient step on the
  // penalty is unstable for the larger grid values of lambda under the
  // 1/sqrt(t+1) step rule, while the proximal step contracts for any
  // lambda and minimizes the same objective.

  if (const auto* lin = std::get_if<LinearSpoFamily>(&family)) {
    if (lin->feature_map.input_dim() != data.feature_dim()) {
      throw std::invalid_argument("feature map input dimension does not match data");
    }
    const Eigen::MatrixXd phi = lin->feature_map.apply_rows(data.xs);  // n x p'
    const int pp = lin->feature_map.output_dim();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, pp);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
    for (int t = 0; t < cfg.iterations; ++t) {
      const double step = cfg.step_scale / std::sqrt(static_cast<double>(t) + 1.0);
      Eigen::MatrixXd grad_w = Eigen::MatrixXd::Zero(d, pp);
      Eigen::VectorXd grad_b = Eigen::VectorXd::Zero(d);
      for (int k = 0; k < cfg.batch_size; ++k) {
        const auto i = static_cast<Eigen::Index>(stream.next_below(n));
        const Eigen::VectorXd c = data.ys.row(i).transpose();
        const Eigen::VectorXd c_hat = w * phi.row(i).transpose() + b;
        const Eigen::VectorXd g =
            2.0 * (z_realized[i] - set.solve(2.0 * c_hat - c).argmin);
        grad_w.noalias() += g * phi.row(i);
        grad_b += g;
      }
      const double inv_batch = 1.0 / static_cast<double>(cfg.batch_size);
      w = (w - step * inv_batch * grad_w) / (1.0 + 2.0 * ridge.lambda * step);
      if (lin->fit_intercept) b -= step * inv_batch * grad_b;  // unpenalized
      maybe_trace(t, [&] {
        return mean_spo_loss(data, set, z_realized,
                             [&](Eigen::Index i) -> Eigen::VectorXd {
                               return w * phi.row(i).transpose() + b;
                             }) +
               ridge.lambda * w.squaredNorm();
      });
    }
    return LinearPredictor{w, b, lin->feature_map};
  }

  if (const auto* ker = std::get_if<KernelSpoFamily>(&family)) {
    const Eigen::MatrixXd gram = gaussian_gram(data.xs, ker->rho);
    // Proximal map of eta * lambda * tr(A^T G A) is (I + 2 eta lambda G)^{-1},
    // applied through one eigendecomposition of the Gram matrix.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    if (ridge.lambda > 0.0) eig.compute(gram);
    Eigen::MatrixXd dual = Eigen::MatrixXd::Zero(n, d);
    for (int t = 0; t < cfg.iterations; ++t) {
      const double step = cfg.step_scale / std::sqrt(static_cast<double>(t) + 1.0);
      Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, d);
      for (int k = 0; k < cfg.batch_size; ++k) {
        const auto i = static_cast<Eigen::Index>(stream.next_below(n));
        const Eigen::VectorXd c = data.ys.row(i).transpose();
        const Eigen::VectorXd c_hat = dual.transpose() * gram.col(i);
        const Eigen::VectorXd g =
            2.0 * (z_realized[i] - set.solve(2.0 * c_hat - c).argmin);
        grad.noalias() += gram.col(i) * g.transpose();
      }
      const double inv_batch = 1.0 / static_cast<double>(cfg.batch_size);
      dual -= step * inv_batch * grad;
      if (ridge.lambda > 0.0) {
        const Eigen::ArrayXd shrink =
            1.0 / (1.0 + 2.0 * ridge.lambda * step * eig.eigenvalues().array().max(0.0));
        dual = eig.eigenvectors() *
               (shrink.matrix().asDiagonal() * (eig.eigenvectors().transpose() * dual));
      }
      maybe_trace(t, [&] {
        return mean_spo_loss(data, set, z_realized,
                             [&](Eigen::Index i) -> Eigen::VectorXd {
                               return dual.transpose() * gram.col(i);
                             }) +
               ridge.lambda * (dual.transpose() * gram * dual).trace();
      });
    }
    return KernelPredictor{data.xs, dual, ker->rho};
  }

  // Offset class f(x) = x - theta; theta is unpenalized and projected
  // onto [-1, 1] after every step.
  if (data.feature_dim() != 1 || d != 1) {
    throw std::invalid_argument("threshold family requires univariate data");
  }
  double theta = 0.0;
  for (int t = 0; t < cfg.iterations; ++t) {
    const double step = cfg.step_scale / std::sqrt(static_cast<double>(t) + 1.0);
    double grad = 0.0;
    for (int k = 0; k < cfg.batch_size; ++k) {
      const auto i = static_cast<Eigen::Index>(stream.next_below(n));
      const Eigen::VectorXd c = data.ys.row(i).transpose();
      const Eigen::VectorXd c_hat = Eigen::VectorXd::Constant(1, data.xs(i, 0) - theta);
      const Eigen::VectorXd g = 2.0 * (z_realized[i] - set.solve(2.0 * c_hat - c).argmin);
      grad += -g[0];
    }
    theta -= step * grad / static_cast<double>(cfg.batch_size);
    theta = std::clamp(theta, -1.0, 1.0);
    maybe_trace(t, [&] {
      return mean_spo_loss(data, set, z_realized, [&](Eigen::Index i) -> Eigen::VectorXd {
        return Eigen::VectorXd::Constant(1, data.xs(i, 0) - theta);
      });
    });
  }
  return threshold_predictor(theta);
}

double spo_plus_objective(const Dataset& data, const Predictor& predictor,
                          const DecisionSet& set, double lambda_penalty) {
  data.validate();
  const auto z_realized = realized_decisions(data, set);
  const auto fn = as_predict_fn(predictor);
  double value = mean_spo_loss(data, set, z_realized, [&](Eigen::Index i) {
    return fn(data.xs.row(i).transpose());
  });
  if (const auto* lin = std::get_if<LinearPredictor>(&predictor)) {
    value += lambda_penalty * lin->coefficients.squaredNorm();
  } else {
    const auto& ker = std::get<KernelPredictor>(predictor);
    const Eigen::MatrixXd gram = gaussian_gram(ker.support_points, ker.rho);
    value += lambda_penalty * (ker.dual_coefficients.transpose() * gram * ker.dual_coefficients)
                                  .trace();
  }
  return value;
}

}  // namespace clobench
