#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "asymgen/grader.hpp"
#include "asymgen/synthesize.hpp"
#include "test_print.hpp"

using namespace asymgen;

namespace {

Expr infix(const char* s) { return parse(s, Dialect::Infix); }

Json roots_params(int n1, int n2, int s2, int s3) {
  return {{"n1", n1}, {"n2", n2}, {"s2", s2}, {"s3", s3}, {"probes", {{"small_eps", 1e-3}, {"large_eps", 1e3}}}};
}

ScoreReport grade(const ProblemRecord& r, const std::string& text) { return score_response(r, {r.id, text}); }

std::string boxed_list(const std::vector<Expr>& roots) {
  std::string s = R"(\boxed{x = \left[)";
  for (std::size_t i = 0; i < roots.size(); ++i) s += (i ? ", " : "") + render_latex(roots[i]);
  return s + R"(\right]})";
}

std::vector<Expr> answers(const ProblemRecord& r, const std::string& regime) {
  std::vector<Expr> out;
  for (const BoxedAnswer& a : r.boxed_answers) {
    if (a.regime == regime) out.push_back(a.expr);
  }
  return out;
}

const Domain small_eps = Domain().decades("epsilon", 1e-8, 1e-2);

}  // namespace

TEST(Extract, SingleBox) {
  std::vector<std::string> notes;
  const std::vector<Expr> e = extract_boxed(R"(so $\boxed{\frac{1}{\epsilon}}$.)", &notes);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0], infix("1/epsilon"));
  EXPECT_TRUE(notes.empty());
}

TEST(Extract, NoBoxIsANoteNotAnError) {
  std::vector<std::string> notes;
  EXPECT_TRUE(extract_boxed("the answer is one half", &notes).empty());
  ASSERT_EQ(notes.size(), 1u);
  EXPECT_EQ(notes[0], "unboxed_answer");
}

TEST(Extract, UnparseableItemsAreNoted) {
  std::vector<std::string> notes;
  const std::vector<Expr> e = extract_boxed(R"(\boxed{x = \left[ 2, \foo{3} \right]})", &notes);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0], Expr::integer(2));
  ASSERT_EQ(notes.size(), 1u);
  EXPECT_EQ(notes[0].rfind("unparseable", 0), 0u);
}

TEST(Extract, BracketedListFallback) {
  std::vector<std::string> notes;
  const std::vector<AnswerGroup> g =
      extract_answer_groups("$\n    \\text{For small } ε: \\left[1, −1, i, −i\\right]$", &notes);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].regime_hint, "small");
  const std::vector<Expr> expected{Expr::integer(1), Expr::integer(-1), Expr::imag_unit(), -Expr::imag_unit()};
  EXPECT_EQ(g[0].exprs, expected);
}

TEST(Extract, PrefixesAndSeparators) {
  const std::vector<AnswerGroup> g = extract_answer_groups(
      R"(\boxed{y(x)=1 - \frac{x^{3}}{6}, \; y = - 6 \left(x - 11.45\right)^{-1}.} and \boxed{\delta \approx- \frac{1}{2}.})");
  ASSERT_EQ(g.size(), 2u);
  ASSERT_EQ(g[0].exprs.size(), 2u);
  EXPECT_EQ(g[0].exprs[0], infix("1 - x^3/6"));
  EXPECT_EQ(g[0].exprs[1], infix("-6/(x - 11.45)"));
  EXPECT_EQ(g[1].exprs, std::vector<Expr>{Expr::rational({-1, 2})});
}

TEST(Equivalent, DisplayedCorrectionEqualsConstant) {
  const Expr shown = parse(R"(\frac{\epsilon \left(\frac{1}{\epsilon}\right)^{\frac{3}{2}}}{2} - \frac{\sqrt{\frac{1}{\epsilon}}}{2} - \frac{1}{2})");
  EXPECT_TRUE(equivalent(shown, Expr::rational({-1, 2}), small_eps));
  EXPECT_TRUE(equivalent(Expr::var("x"), Expr::var("x"), Domain()));
}

TEST(Equivalent, RoundedExponentAgainstExact) {
  // Over eps in [1e-8, 1e-2], eps^(5/6 - 0.8333) departs from 1 by up to
  // 1 - (1e-8)^(-1/30000) = 6.1e-4: equal at a 1e-3 tolerance, not at 1e-6.
  const Expr exact = infix("0.8909*epsilon^(-5/6)");
  const Expr rounded = infix("0.8909*epsilon^(-0.8333)");
  const double gap = std::abs(1.0 - std::pow(1e-8, 0.8333 - 5.0 / 6.0));
  EXPECT_NEAR(gap, 6.14e-4, 1e-6);
  EXPECT_TRUE(equivalent(rounded, exact, small_eps, 1e-3));
  EXPECT_FALSE(equivalent(rounded, exact, small_eps));
}

TEST(Equivalent, RejectsDifferentFunctions) {
  const Domain d = Domain().uniform("x", 0.0, 2.0);
  EXPECT_FALSE(equivalent(infix("sin(x)"), infix("x"), d));
  EXPECT_FALSE(equivalent(infix("x + epsilon"), infix("x"), d));
  EXPECT_TRUE(equivalent(infix("sin(x)^2 + cos(x)^2"), Expr::integer(1), d));
}

TEST(Equivalent, RelationProperties) {
  Rng rng(3);
  const Domain d = Domain().uniform("x", 0.5, 2.0);
  const std::vector<Expr> base{infix("x^3 - 2*x"), infix("atan(x)/x"), infix("exp(x)*sin(x)"), infix("x^(1/2) + 1")};
  for (const Expr& e : base) {
    const Expr shifted = e + Expr::real(1e-6 * rng.uniform(0.5, 1.0));
    const Expr shifted2 = shifted + Expr::real(1e-6 * rng.uniform(0.5, 1.0));
    EXPECT_TRUE(equivalent(e, e, d));
    EXPECT_EQ(equivalent(e, shifted, d, 3e-6), equivalent(shifted, e, d, 3e-6));
    ASSERT_TRUE(equivalent(e, shifted, d, 3e-6));
    ASSERT_TRUE(equivalent(shifted, shifted2, d, 3e-6));
    EXPECT_TRUE(equivalent(e, shifted2, d, 3e-6));
  }
}

TEST(Score, PartialRootListGetsProportionalCredit) {
  const ProblemRecord r = build_record(PType::Roots, roots_params(8, 4, 1, -1), "partial", 0);
  ASSERT_EQ(answers(r, "small_eps").size(), 8u);
  const ScoreReport s = grade(r, "$\n    \\text{For small } ε: \\left[1, −1, i, −i\\right]$");
  EXPECT_DOUBLE_EQ(s.per_regime.at("small_eps"), 0.5);
}

TEST(Score, NoRootListScoresZero) {
  const ProblemRecord r = build_record(PType::Roots, roots_params(6, 4, 1, -1), "no_list", 0);
  const ScoreReport s = grade(r, R"(For large $\epsilon$ the term $\epsilon x^6$ dominates, $P(x) \approx \epsilon x^6.$)");
  EXPECT_DOUBLE_EQ(s.per_regime.at("large_eps"), 0.0);
}

TEST(Score, RootsMonotoneUnderDeletion) {
  const ProblemRecord r = build_record(PType::Roots, roots_params(5, 2, -1, 1), "m", 0);
  for (const std::string regime : {"small_eps", "large_eps"}) {
    std::vector<Expr> roots = answers(r, regime);
    const std::string hint = regime == "small_eps" ? "For small epsilon: " : "For large epsilon: ";
    double previous = grade(r, hint + boxed_list(roots)).per_regime.at(regime);
    EXPECT_DOUBLE_EQ(previous, 1.0);
    while (!roots.empty()) {
      roots.pop_back();
      const double now = grade(r, hint + boxed_list(roots)).per_regime.at(regime);
      EXPECT_LE(now, previous);
      previous = now;
    }
    EXPECT_DOUBLE_EQ(previous, 0.0);
  }
}

TEST(Score, OdeRubric) {
  const Json params = Json::parse(
      R"({"f":[{"num":-1,"den":"5*x^3 - 2*x^2 - x + 2"},{"num":1,"den":"1"},{"num":-1,"den":"24*x^4 + 6*x^2 + 3"},{"num":-1,"den":"12*x^2 - cos(x) + 11"}],"exps":[1,2,1],"ics":[1,0,0]})");
  const ProblemRecord r = build_record(PType::Ode, params, "ode", 0);
  ScoreReport s = grade(r, R"($\boxed{y = 1 - \frac{13 x^{3}}{180}, \; y = \frac{6}{11.45 - x}}$)");
  EXPECT_DOUBLE_EQ(s.per_regime.at("small_x"), 1.0);
  EXPECT_DOUBLE_EQ(s.per_regime.at("large_x"), 1.0);
  s = grade(r, R"($\boxed{y = 1 - \frac{x^{3}}{18}, \; y = \frac{6.5}{11.45 - x}}$)");
  EXPECT_DOUBLE_EQ(s.per_regime.at("small_x"), 0.0);
  EXPECT_DOUBLE_EQ(s.per_regime.at("large_x"), 0.5);
  s = grade(r, R"($\boxed{y = 1, \; y = \frac{1}{11.45 - x}}$)");
  EXPECT_DOUBLE_EQ(s.final, 0.0);
}

TEST(Score, LaplaceHalfCreditForCriticalPoint) {
  const Json params = Json::parse(
      R"({"g":"-1.6*t^2 - 0.5*sin(t) - 1.9","f":"-2.5*t^4 - 0.8*t^3 + 1.4*t^2","sign":1,"a":-0.9,"b":0.3})");
  const ProblemRecord r = build_record(PType::IntegralLaplace, params, "lap", 0);
  EXPECT_DOUBLE_EQ(grade(r, R"(The maximum is at $t_0 = -0.66$, so $\boxed{I(x) \approx 2 e^{x}}$)").final, 0.5);
  EXPECT_DOUBLE_EQ(grade(r, R"($t_0 = 0.1$, so $\boxed{I(x) \approx 2 e^{x}}$)").final, 0.0);
  const std::string exact = render_latex(r.boxed_answers[0].expr);
  EXPECT_DOUBLE_EQ(grade(r, "$\\boxed{" + exact + "}$").final, 1.0);
}

TEST(Score, IntegralRegimesAverage) {
  const ProblemRecord r =
      build_record(PType::IntegralPoly, Json::parse(R"({"terms":[[2,6],[2,9],[5,11],[5,13]],"bound":56})"), "ip", 0);
  const ScoreReport s = grade(r, R"($\boxed{I(\epsilon) = \frac{0.8909}{\epsilon^{5/6}}, \frac{1}{\epsilon}, 3}$)");
  EXPECT_DOUBLE_EQ(s.per_regime.at("small"), 1.0);
  EXPECT_DOUBLE_EQ(s.per_regime.at("intermediate"), 0.0);
  EXPECT_DOUBLE_EQ(s.per_regime.at("very_large"), 0.0);
  EXPECT_DOUBLE_EQ(s.final, 1.0 / 3.0);
}

TEST(Score, NumericEpsilonAcceptsCloserValues) {
  const ProblemRecord r =
      build_record(PType::NondimNumeric, Json::parse(R"({"c1":2,"c2":8,"c3":5,"n1":7,"n2":2})"), "nn", 0);
  EXPECT_DOUBLE_EQ(grade(r, R"($\boxed{\epsilon \approx 0.08}$)").final, 1.0);
  EXPECT_DOUBLE_EQ(grade(r, R"($\boxed{\epsilon \approx 0.0772}$)").final, 1.0);
  EXPECT_DOUBLE_EQ(grade(r, R"($\boxed{\epsilon = \frac{25 \sqrt{10}}{1024}}$)").final, 1.0);
  EXPECT_DOUBLE_EQ(grade(r, R"($\boxed{\epsilon \approx 0.1}$)").final, 0.0);
}

TEST(Score, ReflexiveAndBounded) {
  GenConfig cfg;
  cfg.counts.fill(5);
  cfg.seed = 21;
  cfg.jobs = 4;
  for (const ProblemRecord& r : synthesize(cfg).records) {
    const ScoreReport s = grade(r, r.solution_latex);
    EXPECT_DOUBLE_EQ(s.final, 1.0) << r.id << " " << score_json(s).dump();
    const ScoreReport blank = grade(r, "no idea");
    double sum = 0.0;
    for (const auto& [regime, v] : blank.per_regime) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      sum += v;
    }
    EXPECT_DOUBLE_EQ(blank.final, sum / blank.per_regime.size());
  }
}

TEST(Score, UnknownProblemId) {
  const ProblemRecord r = build_record(PType::Roots, roots_params(3, 1, -1, 1), "known", 0);
  EXPECT_THROW(score_response(std::vector<ProblemRecord>{r}, ResponseRecord{"missing", "x"}), UnknownProblemId);
  EXPECT_EQ(score_response(std::vector<ProblemRecord>{r}, ResponseRecord{"known", r.solution_latex}).final, 1.0);
}

TEST(Responses, ReadAndReportLine) {
  const auto path = std::filesystem::temp_directory_path() / "asymgen_responses.jsonl";
  {
    std::ofstream out(path);
    out << R"({"problem_id": "a", "raw_text": "\\boxed{1}"})" << "\n\n";
    out << R"({"problem_id": "b"})" << "\n";
  }
  try {
    read_responses(path);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::filesystem::remove(path);
}
