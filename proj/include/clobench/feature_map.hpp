#ifndef CLOBENCH_FEATURE_MAP_HPP
#define CLOBENCH_FEATURE_MAP_HPP

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace clobench {

/**
 * Feature transform applied before a linear predictor.
 *
 * identity:          phi(x) = x.
 * monomial_products: all products of distinct coordinates over nonempty
 *   subsets of {1..p}, 2^p - 1 outputs. Order is frozen: subsets sorted
 *   by cardinality, then lexicographically, i.e. for p = 5
 *   x1..x5, x1x2, x1x3, ..., x4x5, x1x2x3, ..., x1x2x3x4x5.
 */
class FeatureMap {
 public:
  enum class Kind { identity, monomial_products };

  FeatureMap() : FeatureMap(Kind::identity, 1) {}

  static FeatureMap identity(int input_dim);
  static FeatureMap monomial_products(int input_dim);
  static FeatureMap from_name(const std::string& name, int input_dim);

  Kind kind() const { return kind_; }
  std::string kind_name() const;
  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;

  /// Feature rows for a batch of inputs (rows of xs).
  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& xs) const;

 private:
  FeatureMap(Kind kind, int input_dim);

  Kind kind_;
  int input_dim_;
  int output_dim_;
  std::vector<std::vector<int>> subsets_;  // monomial index sets, frozen order
};

}  // namespace clobench

#endif  // CLOBENCH_FEATURE_MAP_HPP
