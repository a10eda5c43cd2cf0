#ifndef CLOBENCH_DECISION_SET_HPP
#define CLOBENCH_DECISION_SET_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace clobench {

using DecisionVector = Eigen::VectorXd;

/// Result of minimizing c^T z over a decision set's extreme points.
struct OracleResult {
  DecisionVector argmin;  // an extreme point, tie-broken deterministically
  double value = 0.0;     // objective at argmin
  bool tie = false;       // second-best distinct value within tolerance of the min
};

/// Gap between the best and the best non-optimal extreme-point value.
/// zero_degenerate marks the case where every extreme point is optimal
/// (the objective is constant on the whole set); delta is 0 there.
struct MarginGap {
  double delta = 0.0;
  bool zero_degenerate = false;
  std::int64_t optima_count = 0;  // extreme points within tolerance of the min
};

inline constexpr double kDefaultTieTol = 1e-9;          // relative, scaled by max(1, |c|_inf)
inline constexpr std::size_t kDefaultEnumCap = 1000000; // extreme-point enumeration cap

/**
 * A polytope with an exact linear-minimization oracle over its extreme
 * points.
 *
 * Contracts shared by every implementation:
 *   - solve() picks the minimizer by exact comparisons; exact ties fall
 *     back to the set's fixed tie-break order (the order extreme_points()
 *     enumerates in). The tie tolerance only drives the `tie` flag and
 *     margin_gap(), never the argmin, so the argmin is invariant under
 *     positive rescaling of c.
 *   - extreme_points() returns the exact, duplicate-free vertex list in
 *     tie-break order, or throws std::length_error past the cap.
 *   - margin_gap() reports the distance from the minimum to the smallest
 *     value strictly above the tolerance band, and how many vertices sit
 *     inside the band.
 */
class DecisionSet {
 public:
  virtual ~DecisionSet() = default;

  virtual int dim() const = 0;
  virtual std::string name() const = 0;

  OracleResult solve(const Eigen::VectorXd& cost, double tie_tol = kDefaultTieTol) const {
    return do_solve(cost, tie_tol);
  }
  std::vector<DecisionVector> extreme_points(std::size_t cap = kDefaultEnumCap) const {
    return do_extreme_points(cap);
  }
  MarginGap margin_gap(const Eigen::VectorXd& cost, double tie_tol = kDefaultTieTol) const {
    return do_margin_gap(cost, tie_tol);
  }
  bool is_extreme_point(const Eigen::VectorXd& z, double tol = 1e-9) const {
    return do_is_extreme_point(z, tol);
  }

  /// Largest Euclidean norm over extreme points.
  virtual double radius() const;

 protected:
  virtual OracleResult do_solve(const Eigen::VectorXd& cost, double tie_tol) const = 0;
  virtual std::vector<DecisionVector> do_extreme_points(std::size_t cap) const = 0;
  /// Default route: enumerate vertices and apply the band definition.
  virtual MarginGap do_margin_gap(const Eigen::VectorXd& cost, double tie_tol) const;
  virtual bool do_is_extreme_point(const Eigen::VectorXd& z, double tol) const = 0;

  void check_cost(const Eigen::VectorXd& cost) const;
};

/// Z = [-1, 1] in R^1; vertices {-1, +1}, -1 first under ties.
class IntervalSet final : public DecisionSet {
 public:
  int dim() const override { return 1; }
  std::string name() const override { return "interval"; }

 protected:
  OracleResult do_solve(const Eigen::VectorXd& cost, double tie_tol) const override;
  std::vector<DecisionVector> do_extreme_points(std::size_t cap) const override;
  bool do_is_extreme_point(const Eigen::VectorXd& z, double tol) const override;
};

/// Probability simplex in R^K; vertices are the basis vectors, lowest
/// coordinate index first under ties.
class SimplexSet final : public DecisionSet {
 public:
  explicit SimplexSet(int k);
  int dim() const override { return k_; }
  std::string name() const override { return "simplex"; }

 protected:
  OracleResult do_solve(const Eigen::VectorXd& cost, double tie_tol) const override;
  std::vector<DecisionVector> do_extreme_points(std::size_t cap) const override;
  bool do_is_extreme_point(const Eigen::VectorXd& z, double tol) const override;

 private:
  int k_;
};

/**
 * Source-to-sink paths on a width x height grid DAG with rightward and
 * downward edges; decisions are edge indicator vectors.
 *
 * Edge indexing (frozen; serialized costs and tests depend on it):
 *   - rightward edges first, row-major from the top row:
 *     (r,c)->(r,c+1) has index r*(width-1) + c,
 *   - then downward edges, column-major from the left column:
 *     (r,c)->(r+1,c) has index height*(width-1) + c*(height-1) + r.
 * The source is the top-left node, the sink the bottom-right node.
 *
 * Tie-break order is lexicographic on the path's edge-index sequence,
 * which a depth-first walk preferring rightward edges produces.
 *
 * Path objective values are accumulated back-to-front along the path
 * (the dynamic program's fold); the enumeration route uses the same
 * fold so the two agree bit-for-bit, ties included.
 */
class GridDagSet final : public DecisionSet {
 public:
  GridDagSet(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  int dim() const override { return dim_; }
  std::string name() const override { return "grid"; }

  /// Edges per source-to-sink path: (width-1) + (height-1).
  int path_length() const { return (width_ - 1) + (height_ - 1); }

  /// Number of source-to-sink paths, as a double (exact until huge).
  double path_count() const;

  double radius() const override;

  int right_edge_index(int row, int col) const { return row * (width_ - 1) + col; }
  int down_edge_index(int row, int col) const {
    return height_ * (width_ - 1) + col * (height_ - 1) + row;
  }

 protected:
  OracleResult do_solve(const Eigen::VectorXd& cost, double tie_tol) const override;
  std::vector<DecisionVector> do_extreme_points(std::size_t cap) const override;
  MarginGap do_margin_gap(const Eigen::VectorXd& cost, double tie_tol) const override;
  bool do_is_extreme_point(const Eigen::VectorXd& z, double tol) const override;

 private:
  struct TwoBest;  // per-node best / second-distinct-best suffix values
  TwoBest run_dp(const Eigen::VectorXd& cost) const;

  int width_;
  int height_;
  int dim_;
};

/// Tolerance scale for a cost vector: tie_tol * max(1, |c|_inf).
double tie_tolerance_scale(const Eigen::VectorXd& cost, double tie_tol);

}  // namespace clobench

#endif  // CLOBENCH_DECISION_SET_HPP
