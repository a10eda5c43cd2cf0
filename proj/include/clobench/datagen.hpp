#ifndef CLOBENCH_DATAGEN_HPP
#define CLOBENCH_DATAGEN_HPP

#include <Eigen/Dense>

#include <cstdint>

#include "clobench/dataset.hpp"
#include "clobench/rng.hpp"

namespace clobench {

/// Univariate location model: X ~ Unif[-1,1], Y = X + sigma * eps,
/// eps standard normal.
struct SimpleDgp {
  double sigma2 = 1.0;
};

/// Grid shortest-path model: X ~ N(0, I_5),
/// Y_j = eps_j * (W phi(X) + 3)_j with eps ~ Unif[3/4, 5/4]^40 and
/// phi the 31 monomial products of 5 features.
struct ShortestPathDgp {
  Eigen::MatrixXd coefficients;  // 40 x 31, entries in [0, 1]
};

inline constexpr std::uint64_t kDefaultCoefficientSeed = 10;

/// Draw order is frozen: all X entries row-major, then all noise
/// entries row-major, so substreams replay bit-exactly.
Dataset gen_simple(Eigen::Index n, const SimpleDgp& dgp, RngStream stream);

/// Deterministic 40 x 31 coefficient matrix with Unif[0,1] entries,
/// filled row-major from this library's generator.
Eigen::MatrixXd make_coefficient_matrix(std::uint64_t seed = kDefaultCoefficientSeed);

/// W phi(x) + 3, elementwise.
Eigen::VectorXd true_regression_sp(const Eigen::VectorXd& x, const Eigen::MatrixXd& coefficients);

Dataset gen_shortest_path(Eigen::Index n, const ShortestPathDgp& dgp, RngStream stream);

/// Fresh feature-only draws for evaluation: n rows, Unif[-1,1] for the
/// simple model (p = 1) or N(0, I_p) for the shortest-path model.
Eigen::MatrixXd gen_simple_xs(Eigen::Index n, RngStream stream);
Eigen::MatrixXd gen_gaussian_xs(Eigen::Index n, int p, RngStream stream);

}  // namespace clobench

#endif  // CLOBENCH_DATAGEN_HPP
