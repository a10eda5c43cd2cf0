#include "clobench/feature_map.hpp"

#include <stdexcept>

namespace clobench {

FeatureMap::FeatureMap(Kind kind, int input_dim) : kind_(kind), input_dim_(input_dim) {
  if (input_dim < 1) throw std::invalid_argument("feature map input dimension must be positive");
  if (kind_ == Kind::identity) {
    output_dim_ = input_dim_;
    return;
  }
  if (input_dim_ > 20) {
    throw std::invalid_argument("monomial_products feature map limited to 20 inputs");
  }
  // Subsets by cardinality, lexicographic within a cardinality.
  std::vector<int> current;
  const auto emit = [&](auto&& self, int start, int remaining) -> void {
    if (remaining == 0) {
      subsets_.push_back(current);
      return;
    }
    for (int i = start; i <= input_dim_ - remaining; ++i) {
      current.push_back(i);
      self(self, i + 1, remaining - 1);
      current.pop_back();
    }
  };
  for (int k = 1; k <= input_dim_; ++k) emit(emit, 0, k);
  output_dim_ = static_cast<int>(subsets_.size());
}

FeatureMap FeatureMap::identity(int input_dim) { return FeatureMap(Kind::identity, input_dim); }

FeatureMap FeatureMap::monomial_products(int input_dim) {
  return FeatureMap(Kind::monomial_products, input_dim);
}

FeatureMap FeatureMap::from_name(const std::string& name, int input_dim) {
  if (name == "identity") return identity(input_dim);
  if (name == "monomial_products") return monomial_products(input_dim);
  throw std::invalid_argument("unknown feature map kind: " + name);
}

std::string FeatureMap::kind_name() const {
  return kind_ == Kind::identity ? "identity" : "monomial_products";
}

Eigen::VectorXd FeatureMap::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim_) {
    throw std::invalid_argument("feature map expects input dimension " +
                                std::to_string(input_dim_));
  }
  if (kind_ == Kind::identity) return x;
  Eigen::VectorXd out(output_dim_);
  for (int j = 0; j < output_dim_; ++j) {
    double prod = 1.0;
    for (int idx : subsets_[j]) prod *= x[idx];
    out[j] = prod;
  }
  return out;
}

Eigen::MatrixXd FeatureMap::apply_rows(const Eigen::MatrixXd& xs) const {
  Eigen::MatrixXd out(xs.rows(), output_dim_);
  for (Eigen::Index i = 0; i < xs.rows(); ++i) {
    out.row(i) = (*this)(xs.row(i).transpose()).transpose();
  }
  return out;
}

}  // namespace clobench
