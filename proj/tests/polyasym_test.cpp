#include <gtest/gtest.h>

#include "test_print.hpp"

#include <cmath>

#include "asymgen/grader.hpp"
#include "asymgen/polyasym.hpp"
#include "asymgen/problems.hpp"

using namespace asymgen;

namespace {

Expr infix(const char* s) { return parse(s, Dialect::Infix); }

// Values of `a` and `b` pair up one-to-one at every sample epsilon.
bool same_multiset(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  if (a.size() != b.size()) return false;
  for (double eps : {0.013, 0.4, 7.0, 310.0}) {
    const std::vector<int> m = greedy_match(eval_roots(a, eps), eval_roots(b, eps), 1e-9);
    for (int k : m) {
      if (k < 0) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Nondim, SymbolicDegreesTenNine) {
  const NondimResult r = nondim_symbolic(10, 9);
  EXPECT_EQ(r.epsilon, infix("a1*(a3/a2)^(10/9)/a3"));
  EXPECT_EQ(r.nondim_poly, substitute(infix("epsilon*y^10 + y^9 + 1"), "epsilon", r.epsilon));
}

TEST(Nondim, SymbolicSignsCarryThrough) {
  const NondimResult r = nondim_symbolic(3, 1, -1, 1);
  EXPECT_EQ(r.nondim_poly, substitute(infix("epsilon*y^3 - y + 1"), "epsilon", r.epsilon));
  EXPECT_EQ(r.epsilon, infix("a1*(a3/a2)^3/a3"));
}

TEST(Nondim, NumericSevenTwo) {
  const NondimResult r = nondim_numeric({2, 8, 5, 7, 2});
  EXPECT_EQ(r.epsilon, infix("25*10^(1/2)/1024"));
  EXPECT_NEAR(*r.epsilon_value, 25.0 * std::sqrt(10.0) / 1024.0, 1e-15);
  EXPECT_DOUBLE_EQ(epsilon_decimal(*r.epsilon_value), 0.08);
}

TEST(Nondim, NumericFoldsLeadingSign) {
  const NondimResult r = nondim_numeric({-3, 4, -2, 5, 2});
  ASSERT_TRUE(r.shape.has_value());
  EXPECT_EQ(r.shape->s2, -1);
  EXPECT_EQ(r.shape->s3, 1);
  EXPECT_GT(*r.epsilon_value, 0.0);
  EXPECT_THROW(nondim_numeric({0, 4, -2, 5, 2}), DegenerateInput);
}

TEST(Nondim, DecimalFallsBackToSignificantDigits) {
  EXPECT_DOUBLE_EQ(epsilon_decimal(0.0772), 0.08);
  EXPECT_DOUBLE_EQ(epsilon_decimal(0.0123), 0.012);
  EXPECT_DOUBLE_EQ(epsilon_decimal(3.14159), 3.14);
}

TEST(Balance, SixFiveRootSets) {
  const RootAnalysis a = balance_roots({6, 5, -1, 1});
  const std::vector<Expr> small{
      infix("1/epsilon"), infix("1"), parse(R"(- \frac{1}{4} + \frac{\sqrt{5}}{4} - \frac{i \sqrt{2 \sqrt{5} + 10}}{4})"),
      parse(R"(- \frac{1}{4} + \frac{\sqrt{5}}{4} + \frac{\sqrt{-10 - 2 \sqrt{5}}}{4})"),
      parse(R"(- \frac{\sqrt{5}}{4} - \frac{1}{4} - \frac{i \sqrt{10 - 2 \sqrt{5}}}{4})"),
      parse(R"(- \frac{\sqrt{5}}{4} - \frac{1}{4} + \frac{i \sqrt{10 - 2 \sqrt{5}}}{4})")};
  const std::vector<Expr> large{
      parse(R"(- \sqrt[6]{- \frac{1}{\epsilon}})"), parse(R"(\sqrt[6]{- \frac{1}{\epsilon}})"),
      parse(R"(\frac{\sqrt[6]{- \frac{1}{\epsilon}} \left(-1 - \sqrt{3} i\right)}{2})"),
      parse(R"(\frac{\sqrt[6]{- \frac{1}{\epsilon}} \left(-1 + \sqrt{3} i\right)}{2})"),
      parse(R"(\frac{\sqrt[6]{- \frac{1}{\epsilon}} \left(1 - \sqrt{3} i\right)}{2})"),
      parse(R"(\frac{\sqrt[6]{- \frac{1}{\epsilon}} \left(1 + \sqrt{3} i\right)}{2})")};
  EXPECT_TRUE(same_multiset(a.small.roots, small));
  EXPECT_TRUE(same_multiset(a.large.roots, large));
  EXPECT_EQ(a.small.roots[0], infix("1/epsilon"));
  ASSERT_EQ(a.balances.size(), 3u);
  EXPECT_EQ(a.balances[0].balance.name(), "A+B");
  EXPECT_TRUE(a.balances[0].valid_small);
  EXPECT_FALSE(a.balances[0].valid_large);
  EXPECT_TRUE(a.balances[2].valid_large);
}

TEST(Balance, SolveBalanceCountsNonzeroRoots) {
  const NondimPoly p{8, 4, 1, -1};
  EXPECT_EQ(solve_balance(p, {Term::A, Term::B, Term::C}).size(), 4u);
  EXPECT_EQ(solve_balance(p, {Term::B, Term::C, Term::A}).size(), 4u);
  EXPECT_EQ(solve_balance(p, {Term::A, Term::C, Term::B}).size(), 8u);
}

TEST(Balance, FtaCoverOnGeneratedProblems) {
  Rng rng(4242);
  int covered = 0;
  int draws = 0;
  while (covered < 100) {
    ASSERT_LT(++draws, 1000);
    const Json params = random_params(PType::Roots, rng);
    const NondimPoly p{params["n1"], params["n2"], params["s2"], params["s3"]};
    RootAnalysis a;
    try {
      a = balance_roots(p);
    } catch (const InconsistentCover&) {
      continue;
    }
    for (const RegimeRoots* set : {&a.small, &a.large}) {
      ASSERT_EQ(static_cast<int>(set->roots.size()), p.n1);
      const double eps = set == &a.small ? 1e-3 : 1e3;
      const std::vector<Complex> numeric = numeric_roots(p.coefficients(eps));
      const std::vector<int> m = greedy_match(eval_roots(set->roots, eps), numeric, 0.10);
      for (int k : m) EXPECT_GE(k, 0) << "degree " << p.n1 << "," << p.n2;
    }
    ++covered;
  }
}

TEST(Correction, CubicAtOne) {
  const Correction c = correction_term({3, 1, -1, 1}, Expr::integer(1), EpsRegime::Small);
  EXPECT_EQ(c.delta, infix("-epsilon/(3*epsilon - 1)"));
  EXPECT_TRUE(correction_improves({3, 1, -1, 1}, c, 1e-3));
}

TEST(Correction, LargeRootsShiftByHalf) {
  const NondimPoly p{3, 1, -1, 1};
  const Correction c = correction_term(p, infix("epsilon^(-1/2)"), EpsRegime::Small);
  const Domain d = Domain().decades("epsilon", 1e-8, 1e-2);
  EXPECT_TRUE(equivalent(c.delta, Expr::rational({-1, 2}), d));
}

TEST(Correction, SingularDerivativeThrows) {
  // P'(x) = 2 epsilon x - 1 vanishes at x = 1/(2 epsilon).
  EXPECT_THROW(correction_term({2, 1, -1, 1}, infix("1/(2*epsilon)"), EpsRegime::Small), SingularCorrection);
}

TEST(Correction, ImprovementOnGeneratedProblems) {
  Rng rng(77);
  int total = 0;
  int improved = 0;
  while (total < 400) {
    const Json params = random_params(PType::RootsCorrection, rng);
    const NondimPoly p{params["n1"], params["n2"], params["s2"], params["s3"]};
    RootAnalysis a;
    try {
      a = balance_roots(p);
    } catch (const InconsistentCover&) {
      continue;
    }
    for (const RegimeRoots* set : {&a.small, &a.large}) {
      for (const Expr& r : set->roots) {
        Correction c;
        try {
          c = correction_term(p, r, set->regime);
        } catch (const SingularCorrection&) {
          continue;
        }
        ++total;
        improved += correction_improves(p, c, set->regime == EpsRegime::Small ? 1e-3 : 1e3);
      }
    }
  }
  EXPECT_GE(improved, 0.95 * total) << improved << "/" << total;
}
