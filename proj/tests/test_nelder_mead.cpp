#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "cascade/nelder_mead.hpp"

using cascade::nelder_mead;

TEST(NelderMead, ShiftedQuadratic) {
  auto f = [](const std::array<double, 3>& x) {
    return (x[0] - 1.0) * (x[0] - 1.0) + 2.0 * (x[1] + 0.5) * (x[1] + 0.5) + 3.0 * (x[2] - 2.0) * (x[2] - 2.0);
  };
  const auto r = nelder_mead<3>(f, {0.0, 0.0, 0.0}, {0.5, 0.5, 0.5});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-5);
  EXPECT_NEAR(r.x[1], -0.5, 1e-5);
  EXPECT_NEAR(r.x[2], 2.0, 1e-5);
  EXPECT_LT(r.value, 1e-9);
}

TEST(NelderMead, Rosenbrock) {
  auto f = [](const std::array<double, 2>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const auto r = nelder_mead<2>(f, {-1.2, 1.0}, {0.1, 0.1});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
}

TEST(NelderMead, RespectsInfeasibleRegion) {
  // minimum of the unconstrained quadratic lies at x = -1, outside x > 0
  auto f = [](const std::array<double, 1>& x) {
    if (x[0] <= 0.0) return std::numeric_limits<double>::infinity();
    return (x[0] + 1.0) * (x[0] + 1.0);
  };
  const auto r = nelder_mead<1>(f, {2.0}, {0.5});
  EXPECT_GT(r.x[0], 0.0);
  EXPECT_LT(r.x[0], 1e-6);
}

TEST(NelderMead, NanCountsAsInfeasible) {
  auto f = [](const std::array<double, 1>& x) { return x[0] < 0.0 ? std::nan("") : (x[0] - 1.0) * (x[0] - 1.0); };
  const auto r = nelder_mead<1>(f, {3.0}, {1.0});
  EXPECT_NEAR(r.x[0], 1.0, 1e-5);
}

TEST(NelderMead, EvaluationBudget) {
  auto f = [](const std::array<double, 2>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const auto r = nelder_mead<2>(f, {-1.2, 1.0}, {0.1, 0.1}, {1e-12, 1e-12, 20});
  EXPECT_FALSE(r.converged);
  EXPECT_LE(r.evaluations, 22);
}
