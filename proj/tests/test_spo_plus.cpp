#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "clobench/rng.hpp"
#include "clobench/spo_plus.hpp"

using namespace clobench;

namespace {

Eigen::VectorXd random_vec(int dim, RngStream& stream, double scale = 1.0) {
  Eigen::VectorXd v(dim);
  for (int j = 0; j < dim; ++j) v[j] = scale * stream.uniform(-1.0, 1.0);
  return v;
}

}  // namespace

TEST_CASE("loss point values on the interval") {
  IntervalSet set;
  const auto vec = [](double v) { return Eigen::VectorXd::Constant(1, v); };
  CHECK(spo_plus_loss(vec(-1.0), vec(1.0), set) == 6.0);
  CHECK(spo_plus_loss(vec(0.0), vec(1.0), set) == 2.0);
  CHECK(spo_plus_loss(vec(1.0), vec(1.0), set) == 0.0);
}

TEST_CASE("loss vanishes at a perfect prediction") {
  RngStream stream = RngStream::from_seed(21).derive(1);
  IntervalSet interval;
  SimplexSet simplex(4);
  GridDagSet grid(3, 3);
  const std::vector<const DecisionSet*> sets{&interval, &simplex, &grid};
  for (const DecisionSet* set : sets) {
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd c = random_vec(set->dim(), stream);
      CHECK(std::abs(spo_plus_loss(c, c, *set)) <= 1e-12);
    }
  }
}

TEST_CASE("subgradient point values") {
  IntervalSet set;
  const auto vec = [](double v) { return Eigen::VectorXd::Constant(1, v); };
  CHECK(spo_plus_subgradient(vec(-1.0), vec(1.0), set)[0] == -4.0);
  CHECK(spo_plus_subgradient(vec(1.0), vec(1.0), set)[0] == 0.0);
}

TEST_CASE("loss is nonnegative on random inputs") {
  RngStream stream = RngStream::from_seed(22).derive(2);
  IntervalSet interval;
  SimplexSet simplex(5);
  GridDagSet grid(3, 3);
  const std::vector<const DecisionSet*> sets{&interval, &simplex, &grid};
  for (const DecisionSet* set : sets) {
    for (int trial = 0; trial < 2000; ++trial) {
      const Eigen::VectorXd c_hat = random_vec(set->dim(), stream);
      const Eigen::VectorXd c = random_vec(set->dim(), stream);
      CHECK(spo_plus_loss(c_hat, c, *set) >= -1e-12);
    }
  }
}

TEST_CASE("loss is convex along random segments") {
  RngStream stream = RngStream::from_seed(23).derive(3);
  SimplexSet simplex(5);
  GridDagSet grid(3, 3);
  const std::vector<const DecisionSet*> sets{&simplex, &grid};
  for (const DecisionSet* set : sets) {
    for (int trial = 0; trial < 300; ++trial) {
      const Eigen::VectorXd a = random_vec(set->dim(), stream);
      const Eigen::VectorXd b = random_vec(set->dim(), stream);
      const Eigen::VectorXd c = random_vec(set->dim(), stream);
      const double t = stream.next_double();
      const double blend = spo_plus_loss(t * a + (1.0 - t) * b, c, *set);
      CHECK(blend <=
            t * spo_plus_loss(a, c, *set) + (1.0 - t) * spo_plus_loss(b, c, *set) + 1e-9);
    }
  }
}

TEST_CASE("subgradient supports the loss from below") {
  RngStream stream = RngStream::from_seed(24).derive(4);
  SimplexSet simplex(5);
  GridDagSet grid(3, 3);
  IntervalSet interval;
  const std::vector<const DecisionSet*> sets{&interval, &simplex, &grid};
  for (const DecisionSet* set : sets) {
    for (int trial = 0; trial < 500; ++trial) {
      const Eigen::VectorXd at = random_vec(set->dim(), stream);
      const Eigen::VectorXd other = random_vec(set->dim(), stream);
      const Eigen::VectorXd c = random_vec(set->dim(), stream);
      const Eigen::VectorXd g = spo_plus_subgradient(at, c, *set);
      CHECK(spo_plus_loss(other, c, *set) >=
            spo_plus_loss(at, c, *set) + g.dot(other - at) - 1e-9);
    }
  }
}

TEST_CASE("zero iterations returns the zero predictor") {
  RngStream stream = RngStream::from_seed(25).derive(5);
  Dataset data;
  data.xs = Eigen::MatrixXd::Random(8, 2);
  data.ys = Eigen::MatrixXd::Random(8, 4);
  SimplexSet set(4);
  SgdConfig cfg;
  cfg.iterations = 0;
  const Predictor fit = fit_spo_plus_sgd(data, LinearSpoFamily{FeatureMap::identity(2), true},
                                         set, RidgeConfig{0.1}, cfg, stream);
  const auto& lin = std::get<LinearPredictor>(fit);
  CHECK(lin.coefficients.isZero(0.0));
  CHECK(lin.intercept.isZero(0.0));

  const Predictor kfit =
      fit_spo_plus_sgd(data, KernelSpoFamily{0.5}, set, RidgeConfig{0.1}, cfg, stream);
  CHECK(std::get<KernelPredictor>(kfit).dual_coefficients.isZero(0.0));
}

TEST_CASE("training on a constant target reaches its decisions") {
  RngStream stream = RngStream::from_seed(26).derive(6);
  SimplexSet set(3);
  Eigen::VectorXd c0(3);
  c0 << 0.7, 0.2, 0.9;
  const Eigen::VectorXd z0 = set.solve(c0).argmin;
  Dataset data;
  data.xs.resize(20, 2);
  data.ys.resize(20, 3);
  for (int i = 0; i < 20; ++i) {
    data.xs(i, 0) = stream.uniform(-1, 1);
    data.xs(i, 1) = stream.uniform(-1, 1);
    data.ys.row(i) = c0.transpose();
  }
  SgdConfig cfg;
  cfg.iterations = 2000;
  for (const SpoFamily& family :
       {SpoFamily(LinearSpoFamily{FeatureMap::identity(2), true}),
        SpoFamily(KernelSpoFamily{0.5})}) {
    const Predictor fit =
        fit_spo_plus_sgd(data, family, set, RidgeConfig{0.0}, cfg, stream.derive(17));
    const auto fn = as_predict_fn(fit);
    for (int i = 0; i < 20; ++i) {
      CHECK(set.solve(fn(data.xs.row(i).transpose())).argmin == z0);
    }
  }
}

TEST_CASE("identical seeds give bitwise-identical fits") {
  RngStream stream = RngStream::from_seed(27).derive(7);
  Dataset data;
  data.xs = Eigen::MatrixXd::Random(15, 2);
  data.ys = Eigen::MatrixXd::Random(15, 4);
  SimplexSet set(4);
  SgdConfig cfg;
  cfg.iterations = 200;
  const auto run = [&] {
    return std::get<LinearPredictor>(
        fit_spo_plus_sgd(data, LinearSpoFamily{FeatureMap::identity(2), true}, set,
                         RidgeConfig{0.01}, cfg, stream.derive(5)));
  };
  const LinearPredictor a = run();
  const LinearPredictor b = run();
  CHECK(a.coefficients == b.coefficients);
  CHECK(a.intercept == b.intercept);
}

TEST_CASE("threshold family objective trends down over windows") {
  RngStream stream = RngStream::from_seed(28).derive(8);
  Dataset data = [&] {
    Dataset d;
    d.xs.resize(50, 1);
    for (int i = 0; i < 50; ++i) d.xs(i, 0) = stream.uniform(-1, 1);
    d.ys = d.xs;  // noiseless
    return d;
  }();
  IntervalSet set;
  SgdConfig cfg;
  cfg.iterations = 1000;
  cfg.trace_every = 1;
  std::vector<double> trace;
  fit_spo_plus_sgd(data, ThresholdSpoFamily{}, set, RidgeConfig{0.0}, cfg, stream.derive(3),
                   &trace);
  REQUIRE(trace.size() == 1000);
  std::vector<double> windows;
  for (int w = 0; w < 5; ++w) {
    double sum = 0.0;
    for (int i = 0; i < 200; ++i) sum += trace[w * 200 + i];
    windows.push_back(sum / 200.0);
  }
  for (int w = 0; w + 1 < 5; ++w) {
    CHECK(windows[w + 1] <= windows[w] + 1e-9);
  }
}

TEST_CASE("sgd input validation") {
  Dataset data;
  SimplexSet set(3);
  CHECK_THROWS_AS(fit_spo_plus_sgd(data, KernelSpoFamily{1.0}, set, RidgeConfig{0.0},
                                   SgdConfig{}, RngStream::from_seed(1)),
                  std::invalid_argument);
  Eigen::VectorXd a(2), b(3);
  CHECK_THROWS_AS(spo_plus_loss(a, b, set), std::invalid_argument);
}
