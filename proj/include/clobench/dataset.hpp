#ifndef CLOBENCH_DATASET_HPP
#define CLOBENCH_DATASET_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace clobench {

/// Paired observations (X_i, Y_i), one per row, plus the stream key that
/// generated them (0 for loaded or hand-built data).
struct Dataset {
  Eigen::MatrixXd xs;  // n x p
  Eigen::MatrixXd ys;  // n x d
  std::uint64_t seed = 0;

  Eigen::Index size() const { return xs.rows(); }
  int feature_dim() const { return static_cast<int>(xs.cols()); }
  int target_dim() const { return static_cast<int>(ys.cols()); }

  /// Throws std::invalid_argument on shape mismatch or non-finite entries.
  void validate() const;
};

/// CSV with header x_1..x_p,y_1..y_d, one observation per row, floats
/// written with 17 significant digits (lossless round trip).
void save_dataset_csv(const Dataset& data, const std::string& path);
Dataset load_dataset_csv(const std::string& path, int feature_dim);

}  // namespace clobench

#endif  // CLOBENCH_DATASET_HPP
