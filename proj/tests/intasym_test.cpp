#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "asymgen/intasym.hpp"
#include "test_print.hpp"

using namespace asymgen;

namespace {

Expr infix(const char* s) { return parse(s, Dialect::Infix); }

LaplaceSpec laplace(const char* g, const char* f, int sign, double a, double b) {
  return {infix(g), infix(f), sign, a, b};
}

// Composite Simpson on a fine grid: an independent check of the adaptive rule.
double simpson(const std::function<double(double)>& h, double a, double b, int n = 200000) {
  const double w = (b - a) / n;
  double s = h(a) + h(b);
  for (int i = 1; i < n; ++i) s += h(a + i * w) * (i % 2 ? 4.0 : 2.0);
  return s * w / 3.0;
}

}  // namespace

TEST(PolyIntegral, WorkedExampleRegimes) {
  const PolyIntegralSpec spec{{{2, 6}, {2, 9}, {5, 11}, {5, 13}}, 56.0};
  const auto approx = approx_poly_integral(spec);
  EXPECT_NEAR(approx[0].coefficient, 0.8909, 1e-3);
  EXPECT_EQ(approx[0].eps_exponent, Rational(-5, 6));
  EXPECT_EQ(approx[1].eps_exponent, Rational(-12, 13));
  EXPECT_DOUBLE_EQ(approx[2].coefficient, 56.0);
  EXPECT_EQ(approx[2].eps_exponent, Rational(-1));
  EXPECT_TRUE(validate_poly_integral(spec, approx).pass);
}

TEST(PolyIntegral, HeightTimesWidth) {
  // Height 1/eps, width (eps/c)^(1/d) of the lowest-degree term.
  const PolyIntegralSpec spec{{{3, 5}, {1, 9}}, 10.0};
  const RegimeApprox small = approx_poly_integral(spec)[0];
  EXPECT_DOUBLE_EQ(small.coefficient, round_sig(std::pow(3.0, -1.0 / 5.0), 4));
  EXPECT_EQ(small.eps_exponent, Rational(-4, 5));
  EXPECT_EQ(small.expr(), parse("0.8027*epsilon^(-4/5)", Dialect::Infix));
}

TEST(PolyIntegral, NumericMatchesSimpson) {
  const PolyIntegralSpec spec{{{2, 6}, {5, 11}}, 3.0};
  const double eps = 0.5;
  const double ref = simpson([&](double x) { return 1.0 / (eps + spec.eval(x)); }, 0.0, 3.0);
  EXPECT_NEAR(poly_integral_numeric(spec, eps) / ref, 1.0, 1e-8);
}

TEST(Laplace, InteriorWorkedExample) {
  const LaplaceSpec spec = laplace("-1.6*t^2 - 0.5*sin(t) - 1.9", "-2.5*t^4 - 0.8*t^3 + 1.4*t^2", 1, -0.9, 0.3);
  const CriticalPoint cp = laplace_critical_point(spec);
  EXPECT_EQ(cp.kind, LaplaceKind::Interior);
  EXPECT_NEAR(cp.t0, -0.66, 0.005);
  const LaplaceApprox a = laplace_formula(spec, cp);
  EXPECT_NEAR(a.coefficient, -1.21, 0.01);
  EXPECT_NEAR(a.rate, 0.37, 0.005);
  EXPECT_EQ(a.x_power, Rational(-1, 2));
  EXPECT_TRUE(validate_laplace(spec, a).pass);
}

TEST(Laplace, EndpointWorkedExample) {
  const LaplaceSpec spec =
      laplace("-2.4*t^2 - 2.8*atan(t)", "1.4*t^3 - 2.6*cos(t) + 1.3*atan(t) + 0.4", -1, 0.4, 0.8);
  const CriticalPoint cp = laplace_critical_point(spec);
  EXPECT_EQ(cp.kind, LaplaceKind::Endpoint);
  EXPECT_DOUBLE_EQ(cp.t0, 0.4);
  const LaplaceApprox a = laplace_formula(spec, cp);
  EXPECT_NEAR(a.coefficient, -0.517, 0.002);
  EXPECT_NEAR(a.rate, 1.411, 0.002);
  EXPECT_EQ(a.x_power, Rational(-1));
}

TEST(Laplace, GaussianLimitAtLargeX) {
  // Interior maximum at t = 0: I(x) ~ g(0) sqrt(2 pi / (x |f''(0)|)).
  const LaplaceSpec spec = laplace("1 + t^2 + cos(t)", "-1.5*t^2 + 0.3*t^3 + 0.2*sin(t)^4", 1, -1.0, 0.8);
  const CriticalPoint cp = laplace_critical_point(spec);
  ASSERT_EQ(cp.kind, LaplaceKind::Interior);
  const LaplaceApprox a = laplace_formula(spec, cp);
  const double x = 1e3;
  const RealFn g = compile_real(spec.g, "t");
  const RealFn f = compile_real(spec.f, "t");
  const double f0 = f(cp.t0);
  const double reference =
      simpson([&](double t) { return g(t) * std::exp(x * (f(t) - f0)); }, spec.a, spec.b, 400000);
  EXPECT_NEAR(a.scaled_value(x) / reference, 1.0, 0.005);
  EXPECT_NEAR(laplace_shifted_numeric(spec, cp.t0, x) / reference, 1.0, 1e-7);
}

TEST(Laplace, ZeroAmplitudeThrows) {
  const LaplaceSpec spec = laplace("t", "-t^2", 1, -1.0, 1.0);
  EXPECT_THROW(laplace_formula(spec, laplace_critical_point(spec)), ZeroAmplitude);
}
