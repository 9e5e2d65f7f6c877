#include <gtest/gtest.h>

#include <cmath>

#include "asymgen/odeasym.hpp"
#include "test_print.hpp"

using namespace asymgen;

namespace {

Expr infix(const char* s) { return parse(s, Dialect::Infix); }

RationalFn fn(std::int64_t num, const char* den) { return {num, infix(den)}; }

// y''' = -y''/(5x^3 - 2x^2 - x + 2) + (y')^2 - y/(24x^4 + 6x^2 + 3) - 1/(12x^2 - cos x + 11)
OdeSpec worked_example() {
  OdeSpec s;
  s.f = {fn(-1, "5*x^3 - 2*x^2 - x + 2"), fn(1, "1"), fn(-1, "24*x^4 + 6*x^2 + 3"), fn(-1, "12*x^2 - cos(x) + 11")};
  s.exps = {1, 2, 1};
  s.ics = {1, 0, 0};
  return s;
}

}  // namespace

TEST(Taylor, WorkedExample) {
  EXPECT_EQ(small_x_taylor(worked_example()).expr(), infix("1 - 13*x^3/180"));
}

TEST(Taylor, UsesInitialSlopeAndCurvature) {
  OdeSpec s;
  s.f = {fn(0, "1"), fn(0, "1"), fn(2, "x + 1"), fn(0, "1")};
  s.ics = {3, 1, 2};
  // y'''(0) = 2 * 3 = 6.
  EXPECT_EQ(small_x_taylor(s).expr(), infix("3 + x + x^2 + x^3"));
}

TEST(Taylor, PoleAtOriginThrows) {
  OdeSpec s = worked_example();
  s.f[0] = fn(1, "x^2 + x");
  EXPECT_THROW(small_x_taylor(s), SingularAtOrigin);
}

TEST(PowerLaw, QuarticNonlinearity) {
  // y''' = 6 y^4 has y = (x* - x)^(-1).
  const BlowupSolution b = power_law_solve(0, 4, Expr::integer(6), 2.0);
  EXPECT_EQ(b.p, Rational(-1));
  EXPECT_NEAR(b.beta, 1.0, 1e-12);
  EXPECT_NEAR(b.value(1.5), 2.0, 1e-12);
}

TEST(PowerLaw, SquaredSlope) {
  // y''' = (y')^2: p - 3 = 2 (p - 1) gives p = -1, and y = -6 (x - x*)^(-1).
  const BlowupSolution b = power_law_solve(1, 2, Expr::integer(1), 11.45);
  EXPECT_EQ(b.p, Rational(-1));
  EXPECT_NEAR(eval(b.alpha, {}).real(), -6.0, 1e-12);
  EXPECT_NEAR(b.value(11.0), 6.0 / 0.45, 1e-9);
}

TEST(PowerLaw, FallingFactorial) {
  EXPECT_EQ(falling(Rational(-1), 3), Rational(-6));
  EXPECT_EQ(falling(Rational(1, 2), 2), Rational(-1, 4));
  EXPECT_EQ(falling(Rational(5), 0), Rational(1));
}

TEST(Blowup, WorkedExample) {
  const OdeSolution sol = solve_ode(worked_example());
  EXPECT_EQ(sol.dominance.term, 1);
  EXPECT_EQ(sol.blowup.p, Rational(-1));
  EXPECT_NEAR(eval(sol.blowup.alpha, {}).real(), -6.0, 1e-12);
  EXPECT_NEAR(sol.blowup.x_star, 11.45, 0.05);
  EXPECT_FALSE(sol.blowup.offset.has_value());
  EXPECT_EQ(sol.blowup.expr(), infix("-6/(x - 11.45)"));
  const ValidationReport r = validate_ode(worked_example(), sol);
  EXPECT_TRUE(r.pass) << r.max_error();
}

TEST(Blowup, BoundedSolutionHasNoDivergence) {
  OdeSpec s;
  s.f = {fn(0, "1"), fn(0, "1"), fn(-1, "1"), fn(0, "1")};  // y''' = -y
  s.ics = {1, 0, 0};
  EXPECT_THROW(solve_ode(s, 20.0), NoDivergence);
}
