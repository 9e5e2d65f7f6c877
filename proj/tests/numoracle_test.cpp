#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "asymgen/numoracle.hpp"

using namespace asymgen;

TEST(Quadrature, SmoothIntegrands) {
  EXPECT_NEAR(adaptive_quad([](double t) { return t * t; }, 0.0, 1.0).value, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(adaptive_quad([](double t) { return std::exp(-t * t); }, -8.0, 8.0).value, std::sqrt(std::numbers::pi),
              1e-10);
}

TEST(Quadrature, NarrowPeakNeedsSplit) {
  const double w = 1e-4;
  auto f = [w](double t) { return 1.0 / (w + t * t); };
  const double exact = 2.0 * std::atan(1.0 / std::sqrt(w)) / std::sqrt(w);
  EXPECT_NEAR(adaptive_quad_split(f, -1.0, 1.0, {0.0}).value / exact, 1.0, 1e-8);
}

TEST(Roots, CompanionMatrix) {
  // (x - 1)(x + 2)(x^2 + 1)
  const std::vector<Complex> roots = numeric_roots({-2.0, 1.0, -1.0, 1.0, 1.0});
  ASSERT_EQ(roots.size(), 4u);
  const std::vector<Complex> expected{{1, 0}, {-2, 0}, {0, 1}, {0, -1}};
  const std::vector<int> m = greedy_match(expected, roots, 1e-10);
  for (int k : m) EXPECT_GE(k, 0);
}

TEST(Roots, GreedyMatchLeavesFarValuesUnpaired) {
  const std::vector<int> m = greedy_match({{1, 0}, {5, 0}}, {{1.05, 0}, {-5, 0}}, 0.1);
  EXPECT_EQ(m[0], 0);
  EXPECT_EQ(m[1], -1);
}

TEST(Ode, CubicPolynomialIsExact) {
  // y''' = 0 with y = 1 + 2x + 3x^2.
  const OdeTrace t = integrate_ode([](double, double, double, double) { return 0.0; }, {1.0, 2.0, 6.0}, 2.0);
  ASSERT_FALSE(t.blowup_x.has_value());
  EXPECT_NEAR(t.ys.back()[0], 1.0 + 4.0 + 12.0, 1e-9);
  EXPECT_NEAR(t.at(1.0)[0], 6.0, 1e-8);
}

TEST(Ode, DetectsBlowup) {
  // y = 1/(1 - x) solves y''' = 6 y^4.
  const OdeTrace t =
      integrate_ode([](double, double y, double, double) { return 6.0 * std::pow(y, 4); }, {1.0, 1.0, 2.0}, 5.0);
  ASSERT_TRUE(t.blowup_x.has_value());
  EXPECT_NEAR(*t.blowup_x, 1.0, 2e-3);
  const double xm = 0.9;
  EXPECT_NEAR(t.at(xm)[0], 1.0 / (1.0 - xm), 1e-5);
}

TEST(Validation, GateThreshold) {
  ValidationReport r;
  r.add("small", 0.1, {1.09, 0}, {1.0, 0});
  r.finalize();
  EXPECT_TRUE(r.pass);
  r.add("large", 10, {0.0, 0}, {1.0, 0});
  r.finalize();
  EXPECT_FALSE(r.pass);
  EXPECT_NEAR(r.max_error(), 1.0, 1e-12);
  ValidationReport empty;
  empty.finalize();
  EXPECT_FALSE(empty.pass);
}
