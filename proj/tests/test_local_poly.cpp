#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "clobench/local_poly.hpp"
#include "clobench/rng.hpp"

using namespace clobench;

namespace {

// Direct weighted least-squares reference for p = 1: solve the weighted
// Vandermonde system by QR, one output column at a time.
Eigen::VectorXd wls_reference(double query, const Dataset& data, int degree, double h) {
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const double u = (data.xs(i, 0) - query) / h;
    if (u * u <= 1.0) keep.push_back(static_cast<int>(i));  // uniform kernel
  }
  const int m = static_cast<int>(keep.size());
  Eigen::MatrixXd design(m, degree + 1);
  Eigen::MatrixXd targets(m, data.target_dim());
  for (int r = 0; r < m; ++r) {
    const double u = data.xs(keep[r], 0) - query;
    double pw = 1.0;
    for (int j = 0; j <= degree; ++j) {
      design(r, j) = pw;
      pw *= u;
    }
    targets.row(r) = data.ys.row(keep[r]);
  }
  const Eigen::MatrixXd coefs = design.colPivHouseholderQr().solve(targets);
  return coefs.row(0).transpose();
}

}  // namespace

TEST_CASE("far query under a compact kernel returns zero") {
  Dataset data;
  data.xs = Eigen::MatrixXd::Random(20, 1);
  data.ys = Eigen::MatrixXd::Random(20, 2);
  LocalPolyConfig cfg;
  cfg.beta = 2.0;
  cfg.bandwidth = 0.1;
  cfg.kernel = SmoothingKernel::uniform;
  const Eigen::VectorXd out =
      local_polynomial_fit(Eigen::VectorXd::Constant(1, 50.0), data, cfg);
  CHECK(out.isZero(0.0));
}

TEST_CASE("constant data is reproduced exactly") {
  RngStream stream = RngStream::from_seed(31).derive(1);
  Eigen::VectorXd c(3);
  c << 0.3, -0.2, 0.4;  // norm below 1, no projection
  Dataset data;
  data.xs.resize(30, 2);
  data.ys.resize(30, 3);
  for (int i = 0; i < 30; ++i) {
    data.xs(i, 0) = stream.uniform(-1, 1);
    data.xs(i, 1) = stream.uniform(-1, 1);
    data.ys.row(i) = c.transpose();
  }
  for (const auto kernel :
       {SmoothingKernel::uniform, SmoothingKernel::gaussian, SmoothingKernel::epanechnikov}) {
    LocalPolyConfig cfg;
    cfg.beta = 1.0;  // constant fit
    cfg.bandwidth = 2.0;
    cfg.kernel = kernel;
    const Eigen::VectorXd out = local_polynomial_fit(Eigen::VectorXd::Zero(2), data, cfg);
    CHECK((out - c).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("local linear fit reproduces a degree-1 truth exactly") {
  RngStream stream = RngStream::from_seed(32).derive(2);
  const auto truth = [](double x) {
    Eigen::VectorXd v(2);
    v << 0.2 + 0.3 * x, -0.1 + 0.25 * x;  // values stay inside the unit ball on [-1, 1]
    return v;
  };
  Dataset data;
  data.xs.resize(50, 1);
  data.ys.resize(50, 2);
  for (int i = 0; i < 50; ++i) {
    data.xs(i, 0) = stream.uniform(-1, 1);
    data.ys.row(i) = truth(data.xs(i, 0)).transpose();
  }
  LocalPolyConfig cfg;
  cfg.beta = 2.0;  // degree-1 polynomials
  cfg.kernel = SmoothingKernel::uniform;
  const double h = local_poly_default_bandwidth(50, 2.0, 1);
  for (int q = 0; q < 10; ++q) {
    const double x = -0.9 + 1.8 * q / 9.0;
    const Eigen::VectorXd est =
        local_polynomial_fit(Eigen::VectorXd::Constant(1, x), data, cfg);
    CHECK((est - truth(x)).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK((est - wls_reference(x, data, 1, h)).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("outputs never leave the unit ball") {
  RngStream stream = RngStream::from_seed(33).derive(3);
  Dataset data;
  data.xs.resize(40, 1);
  data.ys.resize(40, 2);
  for (int i = 0; i < 40; ++i) {
    data.xs(i, 0) = stream.uniform(-1, 1);
    data.ys(i, 0) = 20.0 * stream.uniform(-1, 1);  // far outside the ball
    data.ys(i, 1) = 20.0 * stream.uniform(-1, 1);
  }
  LocalPolyConfig cfg;
  cfg.beta = 1.5;
  cfg.kernel = SmoothingKernel::gaussian;
  for (int q = 0; q < 20; ++q) {
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, stream.uniform(-1, 1));
    CHECK(local_polynomial_fit(x, data, cfg).norm() <= 1.0 + 1e-12);
  }
}

TEST_CASE("degenerate designs return zero instead of blowing up") {
  // all points identical: the linear moment matrix is singular
  Dataset data;
  data.xs = Eigen::MatrixXd::Constant(5, 1, 0.2);
  data.ys = Eigen::MatrixXd::Constant(5, 2, 0.4);
  LocalPolyConfig cfg;
  cfg.beta = 2.0;
  cfg.bandwidth = 1.0;
  cfg.kernel = SmoothingKernel::uniform;
  CHECK(local_polynomial_fit(Eigen::VectorXd::Constant(1, 0.2), data, cfg).isZero(0.0));
}

TEST_CASE("local polynomial input validation") {
  Dataset data;
  data.xs = Eigen::MatrixXd::Random(5, 2);
  data.ys = Eigen::MatrixXd::Random(5, 1);
  LocalPolyConfig cfg;
  CHECK_THROWS_AS(local_polynomial_fit(Eigen::VectorXd::Zero(3), data, cfg),
                  std::invalid_argument);
  Eigen::VectorXd bad = Eigen::VectorXd::Constant(2, std::nan(""));
  CHECK_THROWS_AS(local_polynomial_fit(bad, data, cfg), std::invalid_argument);
}
