#ifndef CLOBENCH_LOCAL_POLY_HPP
#define CLOBENCH_LOCAL_POLY_HPP

#include <Eigen/Dense>

#include "clobench/dataset.hpp"

namespace clobench {

enum class SmoothingKernel { uniform, gaussian, epanechnikov };

struct LocalPolyConfig {
  double beta = 1.0;       // smoothness; polynomial degree is the largest integer < beta
  double bandwidth = 0.0;  // <= 0 selects the default n^{-1/(2 beta + p)}
  SmoothingKernel kernel = SmoothingKernel::uniform;
};

/// Default bandwidth n^{-1/(2 beta + p)}.
double local_poly_default_bandwidth(Eigen::Index n, double beta, int p);

/**
 * Kernel-weighted polynomial least squares evaluated at x: fits all
 * monomials (X_i - x)^s with |s| <= floor_strict(beta) under weights
 * K((X_i - x)/h) and returns the constant coefficient, projected onto
 * the Euclidean unit ball. If the weighted moment matrix is singular
 * (condition number above 1e12) the zero vector is returned.
 */
Eigen::VectorXd local_polynomial_fit(const Eigen::VectorXd& x, const Dataset& data,
                                     const LocalPolyConfig& cfg);

}  // namespace clobench

#endif  // CLOBENCH_LOCAL_POLY_HPP
