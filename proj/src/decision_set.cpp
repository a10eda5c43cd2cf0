#include "clobench/decision_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace clobench {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double tie_tolerance_scale(const Eigen::VectorXd& cost, double tie_tol) {
  const double c_inf = cost.size() > 0 ? cost.cwiseAbs().maxCoeff() : 0.0;
  return tie_tol * std::max(1.0, c_inf);
}

void DecisionSet::check_cost(const Eigen::VectorXd& cost) const {
  if (cost.size() != dim()) {
    throw std::invalid_argument("cost dimension " + std::to_string(cost.size()) +
                                " does not match decision set dimension " +
                                std::to_string(dim()));
  }
  if (!cost.allFinite()) {
    throw std::invalid_argument("cost vector has non-finite entries");
  }
}

MarginGap DecisionSet::do_margin_gap(const Eigen::VectorXd& cost, double tie_tol) const {
  check_cost(cost);
  if (tie_tol <= 0.0) throw std::invalid_argument("tie_tol must be positive");
  const auto points = extreme_points();
  double best = kInf;
  for (const auto& z : points) best = std::min(best, cost.dot(z));
  const double band = best + tie_tolerance_scale(cost, tie_tol);

  MarginGap gap;
  double above = kInf;
  for (const auto& z : points) {
    const double v = cost.dot(z);
    if (v <= band) {
      ++gap.optima_count;
    } else {
      above = std::min(above, v);
    }
  }
  if (gap.optima_count == static_cast<std::int64_t>(points.size())) {
    gap.zero_degenerate = true;
    gap.delta = 0.0;
  } else {
    gap.delta = above - best;
  }
  return gap;
}

double DecisionSet::radius() const {
  double r = 0.0;
  for (const auto& z : extreme_points()) r = std::max(r, z.norm());
  return r;
}

// ---------------------------------------------------------------------------
// IntervalSet

OracleResult IntervalSet::do_solve(const Eigen::VectorXd& cost, double tie_tol) const {
  check_cost(cost);
  const double c = cost[0];
  OracleResult res;
  res.argmin = DecisionVector::Constant(1, c >= 0.0 ? -1.0 : 1.0);
  res.value = c * res.argmin[0];
  res.tie = 2.0 * std::abs(c) <= tie_tolerance_scale(cost, tie_tol);
  return res;
}

std::vector<DecisionVector> IntervalSet::do_extreme_points(std::size_t) const {
  return {DecisionVector::Constant(1, -1.0), DecisionVector::Constant(1, 1.0)};
}

bool IntervalSet::do_is_extreme_point(const Eigen::VectorXd& z, double tol) const {
  return z.size() == 1 && (std::abs(z[0] - 1.0) <= tol || std::abs(z[0] + 1.0) <= tol);
}

// ---------------------------------------------------------------------------
// SimplexSet

SimplexSet::SimplexSet(int k) : k_(k) {
  if (k < 1) throw std::invalid_argument("simplex dimension must be positive");
}

OracleResult SimplexSet::do_solve(const Eigen::VectorXd& cost, double tie_tol) const {
  check_cost(cost);
  int best = 0;
  for (int i = 1; i < k_; ++i) {
    if (cost[i] < cost[best]) best = i;
  }
  double second = kInf;
  for (int i = 0; i < k_; ++i) {
    if (i != best) second = std::min(second, cost[i]);
  }
  OracleResult res;
  res.argmin = DecisionVector::Zero(k_);
  res.argmin[best] = 1.0;
  res.value = cost[best];
  res.tie = k_ > 1 && second - cost[best] <= tie_tolerance_scale(cost, tie_tol);
  return res;
}

std::vector<DecisionVector> SimplexSet::do_extreme_points(std::size_t cap) const {
  if (static_cast<std::size_t>(k_) > cap) {
    throw std::length_error("simplex vertex count exceeds enumeration cap");
  }
  std::vector<DecisionVector> points;
  points.reserve(k_);
  for (int i = 0; i < k_; ++i) {
    DecisionVector e = DecisionVector::Zero(k_);
    e[i] = 1.0;
    points.push_back(std::move(e));
  }
  return points;
}

bool SimplexSet::do_is_extreme_point(const Eigen::VectorXd& z, double tol) const {
  if (z.size() != k_) return false;
  int ones = 0;
  for (int i = 0; i < k_; ++i) {
    if (std::abs(z[i] - 1.0) <= tol) {
      ++ones;
    } else if (std::abs(z[i]) > tol) {
      return false;
    }
  }
  return ones == 1;
}

// ---------------------------------------------------------------------------
// GridDagSet

GridDagSet::GridDagSet(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("grid width and height must be positive");
  }
  dim_ = height_ * (width_ - 1) + width_ * (height_ - 1);
  if (dim_ < 1) throw std::invalid_argument("grid must have at least one edge");
}

double GridDagSet::path_count() const {
  // C(path_length, width-1)
  double count = 1.0;
  const int n = path_length();
  const int k = std::min(width_ - 1, height_ - 1);
  for (int i = 1; i <= k; ++i) {
    count = count * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(count);
}

// Best and smallest-strictly-greater suffix value per node, plus the
// count of paths attaining the best value exactly. Values are folded
// back-to-front: V[u] = cost[e] + V[child].
struct GridDagSet::TwoBest {
  std::vector<double> best;
  std::vector<double> second;  // +inf when every suffix has the same value
  std::vector<std::int64_t> count;
};

GridDagSet::TwoBest GridDagSet::run_dp(const Eigen::VectorXd& cost) const {
  const int W = width_, H = height_;
  TwoBest dp;
  dp.best.assign(W * H, kInf);
  dp.second.assign(W * H, kInf);
  dp.count.assign(W * H, 0);
  const auto node = [W](int r, int c) { return r * W + c; };

  dp.best[node(H - 1, W - 1)] = 0.0;
  dp.count[node(H - 1, W - 1)] = 1;

  for (int r = H - 1; r >= 0; --r) {
    for (int c = W - 1; c >= 0; --c) {
      if (r == H - 1 && c == W - 1) continue;
      const int u = node(r, c);
      double cand_best[4];
      double cand_second[4];
      std::int64_t cand_count[4];
      int m = 0;
      if (c + 1 < W) {
        const double e = cost[right_edge_index(r, c)];
        const int v = node(r, c + 1);
        cand_best[m] = e + dp.best[v];
        cand_second[m] = dp.second[v] == kInf ? kInf : e + dp.second[v];
        cand_count[m] = dp.count[v];
        ++m;
      }
      if (r + 1 < H) {
        const double e = cost[down_edge_index(r, c)];
        const int v = node(r + 1, c);
        cand_best[m] = e + dp.best[v];
        cand_second[m] = dp.second[v] == kInf ? kInf : e + dp.second[v];
        cand_count[m] = dp.count[v];
        ++m;
      }
      double b = kInf;
      for (int i = 0; i < m; ++i) b = std::min(b, cand_best[i]);
      double s = kInf;
      std::int64_t n1 = 0;
      for (int i = 0; i < m; ++i) {
        if (cand_best[i] == b) {
          n1 += cand_count[i];
          if (cand_second[i] > b) s = std::min(s, cand_second[i]);
        } else {
          s = std::min(s, cand_best[i]);
        }
      }
      dp.best[u] = b;
      dp.second[u] = s;
      dp.count[u] = n1;
    }
  }
  return dp;
}

OracleResult GridDagSet::do_solve(const Eigen::VectorXd& cost, double tie_tol) const {
  check_cost(cost);
  const auto dp = run_dp(cost);
  const int W = width_, H = height_;
  const auto node = [W](int r, int c) { return r * W + c; };

  OracleResult res;
  res.argmin = DecisionVector::Zero(dim_);
  // Greedy extraction; rightward edges have smaller indices than downward
  // ones, so preferring them on equal continuations yields the
  // lexicographically smallest optimal edge sequence.
  int r = 0, c = 0;
  while (r != H - 1 || c != W - 1) {
    const bool can_right = c + 1 < W;
    const bool can_down = r + 1 < H;
    bool go_right;
    if (can_right && can_down) {
      const double via_right = cost[right_edge_index(r, c)] + dp.best[node(r, c + 1)];
      const double via_down = cost[down_edge_index(r, c)] + dp.best[node(r + 1, c)];
      go_right = via_right <= via_down;
    } else {
      go_right = can_right;
    }
    if (go_right) {
      res.argmin[right_edge_index(r, c)] = 1.0;
      ++c;
    } else {
      res.argmin[down_edge_index(r, c)] = 1.0;
      ++r;
    }
  }
  res.value = dp.best[node(0, 0)];
  const double second = dp.second[node(0, 0)];
  if (second == kInf) {
    res.tie = path_count() > 1.5;  // all paths optimal
  } else {
    res.tie = second - res.value <= tie_tolerance_scale(cost, tie_tol);
  }
  return res;
}

std::vector<DecisionVector> GridDagSet::do_extreme_points(std::size_t cap) const {
  if (path_count() > static_cast<double>(cap)) {
    throw std::length_error("grid path count exceeds enumeration cap");
  }
  std::vector<DecisionVector> points;
  points.reserve(static_cast<std::size_t>(path_count()));
  std::vector<int> edges;
  edges.reserve(path_length());
  // Depth-first, rightward edge first: lexicographic edge-sequence order.
  const auto walk = [&](auto&& self, int r, int c) -> void {
    if (r == height_ - 1 && c == width_ - 1) {
      DecisionVector z = DecisionVector::Zero(dim_);
      for (int e : edges) z[e] = 1.0;
      points.push_back(std::move(z));
      return;
    }
    if (c + 1 < width_) {
      edges.push_back(right_edge_index(r, c));
      self(self, r, c + 1);
      edges.pop_back();
    }
    if (r + 1 < height_) {
      edges.push_back(down_edge_index(r, c));
      self(self, r + 1, c);
      edges.pop_back();
    }
  };
  walk(walk, 0, 0);
  return points;
}

MarginGap GridDagSet::do_margin_gap(const Eigen::VectorXd& cost, double tie_tol) const {
  check_cost(cost);
  if (tie_tol <= 0.0) throw std::invalid_argument("tie_tol must be positive");
  const auto dp = run_dp(cost);
  const double best = dp.best[0];
  const double second = dp.second[0];
  const double tol = tie_tolerance_scale(cost, tie_tol);

  MarginGap gap;
  if (second == kInf) {
    // Every path attains the same value, so the objective is constant on
    // the whole polytope.
    gap.zero_degenerate = true;
    gap.delta = 0.0;
    gap.optima_count = dp.count[0];
    return gap;
  }
  if (second - best > tol) {
    gap.delta = second - best;
    gap.optima_count = dp.count[0];
    return gap;
  }
  // The second-distinct value falls inside the tolerance band. The DP
  // cannot see past it, so resolve by enumeration when feasible.
  if (path_count() <= static_cast<double>(kDefaultEnumCap)) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(path_count()));
    std::vector<double> suffix;  // back-to-front fold, matching the DP
    const auto walk = [&](auto&& self, int r, int c) -> void {
      if (r == height_ - 1 && c == width_ - 1) {
        double v = 0.0;
        for (auto it = suffix.rbegin(); it != suffix.rend(); ++it) v = *it + v;
        values.push_back(v);
        return;
      }
      if (c + 1 < width_) {
        suffix.push_back(cost[right_edge_index(r, c)]);
        self(self, r, c + 1);
        suffix.pop_back();
      }
      if (r + 1 < height_) {
        suffix.push_back(cost[down_edge_index(r, c)]);
        self(self, r + 1, c);
        suffix.pop_back();
      }
    };
    walk(walk, 0, 0);
    const double lo = *std::min_element(values.begin(), values.end());
    double above = kInf;
    for (double v : values) {
      if (v <= lo + tol) {
        ++gap.optima_count;
      } else {
        above = std::min(above, v);
      }
    }
    if (gap.optima_count == static_cast<std::int64_t>(values.size())) {
      gap.zero_degenerate = true;
      gap.delta = 0.0;
    } else {
      gap.delta = above - lo;
    }
    return gap;
  }
  gap.delta = second - best;
  gap.optima_count = dp.count[0];
  return gap;
}

double GridDagSet::radius() const { return std::sqrt(static_cast<double>(path_length())); }

bool GridDagSet::do_is_extreme_point(const Eigen::VectorXd& z, double tol) const {
  if (z.size() != dim_) return false;
  std::vector<char> chosen(dim_, 0);
  int ones = 0;
  for (int i = 0; i < dim_; ++i) {
    if (std::abs(z[i] - 1.0) <= tol) {
      chosen[i] = 1;
      ++ones;
    } else if (std::abs(z[i]) > tol) {
      return false;
    }
  }
  if (ones != path_length()) return false;
  // Walk from the source; the chosen edges must form a single path.
  int r = 0, c = 0, used = 0;
  while (r != height_ - 1 || c != width_ - 1) {
    const bool right = c + 1 < width_ && chosen[right_edge_index(r, c)];
    const bool down = r + 1 < height_ && chosen[down_edge_index(r, c)];
    if (right && down) return false;
    if (right) {
      ++c;
    } else if (down) {
      ++r;
    } else {
      return false;
    }
    ++used;
  }
  return used == ones;
}

}  // namespace clobench
