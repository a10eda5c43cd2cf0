#include "clobench/local_poly.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace clobench {

namespace {

constexpr double kConditionLimit = 1e12;

// Largest integer strictly smaller than beta.
int strict_floor(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  return static_cast<int>(std::ceil(beta)) - 1;
}

double kernel_weight(SmoothingKernel kernel, double squared_norm) {
  switch (kernel) {
    case SmoothingKernel::uniform:
      return squared_norm <= 1.0 ? 1.0 : 0.0;
    case SmoothingKernel::gaussian:
      return std::exp(-0.5 * squared_norm);
    case SmoothingKernel::epanechnikov:
      return std::max(0.0, 1.0 - squared_norm);
  }
  return 0.0;
}

// Multi-indices s in Z_+^p with |s| <= degree, graded then lexicographic;
// the all-zero index comes first.
std::vector<std::vector<int>> multi_indices(int p, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> tuple(p, 0);
  const auto grade = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == p - 1) {
      tuple[pos] = remaining;
      out.push_back(tuple);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      tuple[pos] = e;
      self(self, pos + 1, remaining - e);
    }
  };
  for (int g = 0; g <= degree; ++g) grade(grade, 0, g);
  return out;
}

double monomial(const Eigen::VectorXd& u, const std::vector<int>& s) {
  double v = 1.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    for (int e = 0; e < s[j]; ++e) v *= u[static_cast<Eigen::Index>(j)];
  }
  return v;
}

}  // namespace

double local_poly_default_bandwidth(Eigen::Index n, double beta, int p) {
  return std::pow(static_cast<double>(n), -1.0 / (2.0 * beta + static_cast<double>(p)));
}

Eigen::VectorXd local_polynomial_fit(const Eigen::VectorXd& x, const Dataset& data,
                                     const LocalPolyConfig& cfg) {
  data.validate();
  if (!x.allFinite()) throw std::invalid_argument("query point has non-finite entries");
  if (x.size() != data.feature_dim()) {
    throw std::invalid_argument("query point dimension does not match data");
  }
  const int p = data.feature_dim();
  const int d = data.target_dim();
  const int degree = strict_floor(cfg.beta);
  const double h = cfg.bandwidth > 0.0 ? cfg.bandwidth
                                       : local_poly_default_bandwidth(data.size(), cfg.beta, p);
  const auto indices = multi_indices(p, degree);
  const int m = static_cast<int>(indices.size());

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m, m);      // weighted moment matrix
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(d, m);
  Eigen::VectorXd powers(m);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const Eigen::VectorXd u = data.xs.row(i).transpose() - x;
    const double w = kernel_weight(cfg.kernel, u.squaredNorm() / (h * h));
    if (w == 0.0) continue;
    for (int a = 0; a < m; ++a) powers[a] = monomial(u, indices[a]);
    q.noalias() += w * powers * powers.transpose();
    v.noalias() += w * data.ys.row(i).transpose() * powers.transpose();
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi > kConditionLimit * lo) {
    return Eigen::VectorXd::Zero(d);
  }
  // Constant coefficient of the weighted least-squares fit; the all-zero
  // multi-index is first.
  const Eigen::VectorXd pick = q.ldlt().solve(Eigen::VectorXd::Unit(m, 0));
  Eigen::VectorXd estimate = v * pick;
  const double norm = estimate.norm();
  if (norm > 1.0) estimate /= norm;
  return estimate;
}

}  // namespace clobench
