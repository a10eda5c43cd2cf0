#include "clobench/datagen.hpp"

#include <cmath>
#include <stdexcept>

#include "clobench/feature_map.hpp"

namespace clobench {

Dataset gen_simple(Eigen::Index n, const SimpleDgp& dgp, RngStream stream) {
  if (n < 1) throw std::invalid_argument("sample size must be positive");
  if (dgp.sigma2 < 0.0) throw std::invalid_argument("sigma2 must be nonnegative");
  const double sigma = std::sqrt(dgp.sigma2);
  Dataset data;
  data.seed = stream.key();
  data.xs.resize(n, 1);
  data.ys.resize(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) data.xs(i, 0) = stream.uniform(-1.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) data.ys(i, 0) = data.xs(i, 0) + sigma * stream.normal();
  return data;
}

Eigen::MatrixXd make_coefficient_matrix(std::uint64_t seed) {
  RngStream stream = RngStream::from_seed(seed).derive(/*phase=*/0x57u);
  Eigen::MatrixXd w(40, 31);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 31; ++j) w(i, j) = stream.next_double();
  }
  return w;
}

Eigen::VectorXd true_regression_sp(const Eigen::VectorXd& x,
                                   const Eigen::MatrixXd& coefficients) {
  static const FeatureMap phi = FeatureMap::monomial_products(5);
  if (x.size() != 5) throw std::invalid_argument("shortest-path features have dimension 5");
  if (coefficients.cols() != phi.output_dim()) {
    throw std::invalid_argument("coefficient matrix must have 31 columns");
  }
  return (coefficients * phi(x)).array() + 3.0;
}

Dataset gen_shortest_path(Eigen::Index n, const ShortestPathDgp& dgp, RngStream stream) {
  if (n < 1) throw std::invalid_argument("sample size must be positive");
  const Eigen::Index d = dgp.coefficients.rows();
  Dataset data;
  data.seed = stream.key();
  data.xs.resize(n, 5);
  data.ys.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < 5; ++j) data.xs(i, j) = stream.normal();
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd mean = true_regression_sp(data.xs.row(i).transpose(), dgp.coefficients);
    for (Eigen::Index j = 0; j < d; ++j) {
      data.ys(i, j) = stream.uniform(0.75, 1.25) * mean[j];
    }
  }
  return data;
}

Eigen::MatrixXd gen_simple_xs(Eigen::Index n, RngStream stream) {
  Eigen::MatrixXd xs(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) xs(i, 0) = stream.uniform(-1.0, 1.0);
  return xs;
}

Eigen::MatrixXd gen_gaussian_xs(Eigen::Index n, int p, RngStream stream) {
  Eigen::MatrixXd xs(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) xs(i, j) = stream.normal();
  }
  return xs;
}

}  // namespace clobench
