#include <gtest/gtest.h>

#include "test_print.hpp"

#include <cmath>

#include "asymgen/expr.hpp"
#include "asymgen/rng.hpp"

using namespace asymgen;

namespace {

const Expr x = Expr::var("x");
const Expr eps = Expr::param("epsilon");

Expr positive_base(Rng& rng, int depth);

// Random differentiable expression in x. Fractional powers only see bases
// that stay positive on [0.5, 1.5], so the principal branch never jumps.
Expr random_expr(Rng& rng, int depth) {
  if (depth == 0) {
    switch (rng.uniform_int(0, 3)) {
      case 0: return x;
      case 1: return Expr::integer(rng.uniform_int(-5, 5));
      case 2: return Expr::real(std::round(rng.uniform(-3.0, 3.0) * 10.0) / 10.0);
      default: return pow(x, Rational(rng.uniform_int(2, 4)));
    }
  }
  switch (rng.uniform_int(0, 7)) {
    case 0: return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    case 1: return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
    case 2: return pow(random_expr(rng, depth - 1), Rational(rng.uniform_int(2, 3)));
    case 3: return pow(positive_base(rng, depth - 1), Rational(rng.uniform_int(-3, 3), rng.uniform_int(2, 3)));
    case 4: return sin(random_expr(rng, depth - 1));
    case 5: return cos(random_expr(rng, depth - 1));
    case 6: return atan(random_expr(rng, depth - 1));
    default: return exp(Expr::real(0.5) * sin(random_expr(rng, depth - 1)));
  }
}

Expr positive_base(Rng& rng, int depth) {
  switch (rng.uniform_int(0, 2)) {
    case 0: return x;
    case 1: return pow(random_expr(rng, depth), Rational(2)) + Expr::integer(1);
    default: return exp(atan(random_expr(rng, depth)));
  }
}

Complex at(const Expr& e, double v) { return eval(e, {{"x", v}}); }

// Richardson-extrapolated central difference.
Complex finite_difference(const Expr& e, double v) {
  auto central = [&](double h) { return (at(e, v + h) - at(e, v - h)) / (2.0 * h); };
  const double h = 1e-5;
  return (4.0 * central(h / 2) - central(h)) / 3.0;
}

}  // namespace

TEST(Expr, CanonicalFormsCollapse) {
  EXPECT_EQ(x + x, Expr::integer(2) * x);
  EXPECT_EQ((x * eps) * x, eps * pow(x, Rational(2)));
  EXPECT_EQ(x - x, Expr::integer(0));
  EXPECT_EQ(pow(pow(eps, Rational(1, 2)), Rational(2)), eps);
  EXPECT_EQ(Expr::integer(1) / Expr::integer(3) + Expr::integer(1) / Expr::integer(6), Expr::rational({1, 2}));
  EXPECT_EQ(Expr::imag_unit() * Expr::imag_unit(), Expr::integer(-1));
}

TEST(Expr, CommutedInputsCompareEqual) {
  EXPECT_EQ(parse("1 + x*epsilon - x^2", Dialect::Infix), parse("-x^2 + epsilon*x + 1", Dialect::Infix));
  EXPECT_EQ(parse(R"(\frac{a_{1}}{a_{2}})"), parse("a1/a2", Dialect::Infix));
}

TEST(Expr, ParseLatexLite) {
  EXPECT_EQ(parse(R"(\sqrt[3]{\frac{1}{\epsilon}})"), pow(eps, Rational(-1, 3)));
  EXPECT_EQ(parse(R"(2 \cdot x)"), Expr::integer(2) * x);
  EXPECT_EQ(parse(R"(\left(x + 1\right)^{2})"), pow(x + Expr::integer(1), Rational(2)));
  EXPECT_EQ(parse("e^{x}"), exp(x));
  EXPECT_EQ(parse("i^{2}"), Expr::integer(-1));
}

TEST(Expr, ParseErrors) {
  EXPECT_THROW(parse("1 + ", Dialect::Infix), SyntaxError);
  EXPECT_THROW(parse(R"(\frac{1}{)"), SyntaxError);
  EXPECT_THROW(parse(R"(\foo{x})"), Error);
}

TEST(Expr, EvalBranches) {
  const Expr cube_root = pow(Expr::var("y"), Rational(1, 3));
  EXPECT_NEAR(eval(cube_root, {{"y", -8.0}}, Branch::RealOddRoot).real(), -2.0, 1e-12);
  const Complex principal = eval(cube_root, {{"y", -8.0}});
  EXPECT_NEAR(principal.real(), 1.0, 1e-12);
  EXPECT_NEAR(principal.imag(), std::sqrt(3.0), 1e-12);
  EXPECT_THROW(eval(pow(x, Rational(-1)), {{"x", 0.0}}), DomainError);
  EXPECT_THROW(eval(x, {}), UnboundSymbol);
}

TEST(Expr, DerivativeMatchesFiniteDifference) {
  Rng rng(20240611);
  int checked = 0;
  int attempts = 0;
  while (checked < 500 && attempts < 5000) {
    ++attempts;
    const Expr f = random_expr(rng, static_cast<int>(rng.uniform_int(1, 3)));
    const double v = rng.uniform(0.5, 1.5);
    const Complex fd = finite_difference(f, v);
    if (!std::isfinite(std::abs(fd)) || std::abs(at(f, v)) > 1e6) continue;
    const Complex d = at(differentiate(f, "x"), v);
    EXPECT_LE(std::abs(d - fd) / std::max(1.0, std::abs(fd)), 1e-5) << render_infix(f) << " at x=" << v;
    ++checked;
  }
  EXPECT_EQ(checked, 500);
}

TEST(Expr, RenderRoundTrip) {
  Rng rng(99);
  for (int i = 0; i < 300; ++i) {
    const Expr e = random_expr(rng, 3) * pow(eps, Rational(rng.uniform_int(-3, 3), 2));
    EXPECT_EQ(parse(render_infix(e), Dialect::Infix), e) << render_infix(e);
    EXPECT_EQ(parse(render_latex(e)), e) << render_latex(e);
  }
}

TEST(Expr, CompiledMatchesEval) {
  const Expr f = parse("2.5*x^3 - sin(x)/(x^2 + 1) + atan(x)*exp(-x)", Dialect::Infix);
  const RealFn g = compile_real(f, "x");
  for (double v : {-2.0, -0.3, 0.0, 0.7, 4.0}) EXPECT_NEAR(g(v), at(f, v).real(), 1e-12 * std::max(1.0, g(v)));
}

TEST(Expr, Utilities) {
  const Expr p = parse("epsilon*x^6 - x^5 + 1", Dialect::Infix);
  EXPECT_EQ(coefficient(p, "x", 6), eps);
  EXPECT_EQ(coefficient(p, "x", 5), Expr::integer(-1));
  EXPECT_EQ(*monomial_degree(Expr::integer(3) * pow(x, Rational(4)), "x"), Rational(4));
  EXPECT_EQ(substitute(p, "x", Expr::integer(1)), eps);
  EXPECT_EQ(free_symbols(p), (std::set<std::string>{"epsilon", "x"}));
  EXPECT_TRUE(is_positive(pow(eps, Rational(-5, 6)) * Expr::real(0.8909)));
  EXPECT_DOUBLE_EQ(round_sig(0.89087, 4), 0.8909);
}
