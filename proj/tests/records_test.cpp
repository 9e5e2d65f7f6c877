#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "asymgen/synthesize.hpp"
#include "test_print.hpp"

using namespace asymgen;

namespace {

Json laplace_endpoint() {
  return Json::parse(
      R"J({"g":"-2.4*t^2 - 2.8*atan(t)","f":"1.4*t^3 - 2.6*cos(t) + 1.3*atan(t) + 0.4","sign":-1,"a":0.4,"b":0.8})J");
}

Json roots_params(int n1, int n2, int s2, int s3) {
  return {{"n1", n1}, {"n2", n2}, {"s2", s2}, {"s3", s3}, {"probes", {{"small_eps", 1e-3}, {"large_eps", 1e3}}}};
}

std::vector<ProblemRecord> small_corpus() {
  GenConfig cfg;
  cfg.counts.fill(3);
  cfg.seed = 11;
  return synthesize(cfg).records;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("asymgen_" + name + ".jsonl");
}

}  // namespace

TEST(Records, SerializationIsByteExact) {
  for (const ProblemRecord& r : small_corpus()) {
    const std::string line = serialize(r);
    std::istringstream in(line + "\n");
    const std::vector<ProblemRecord> back = read_records(in);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0], r);
    EXPECT_EQ(serialize(back[0]), line);
  }
}

TEST(Records, FileRoundTrip) {
  const std::vector<ProblemRecord> records = small_corpus();
  const auto path = temp_file("roundtrip");
  write_records(records, path);
  EXPECT_EQ(read_records(path), records);
  std::filesystem::remove(path);
}

TEST(Records, EmptyFile) {
  const auto path = temp_file("empty");
  write_records({}, path);
  EXPECT_EQ(std::filesystem::file_size(path), 0u);
  EXPECT_TRUE(read_records(path).empty());
  std::filesystem::remove(path);
}

TEST(Records, MalformedLineReportsItsNumber) {
  const std::vector<ProblemRecord> records = small_corpus();
  std::ostringstream out;
  for (int i = 0; i < 16; ++i) out << serialize(records[i % records.size()]) << "\n";
  out << "{\"schema_version\": 1, \"id\": \n";
  out << serialize(records[0]) << "\n";
  std::istringstream in(out.str());
  try {
    read_records(in);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.line(), 17u);
  }
}

TEST(Records, MissingFieldAndVersion) {
  Json j = to_json(small_corpus()[0]);
  j.erase("params");
  EXPECT_THROW(from_json(j, 3), SchemaError);
  j = to_json(small_corpus()[0]);
  j["schema_version"] = 99;
  EXPECT_THROW(from_json(j), SchemaError);
  EXPECT_THROW(read_records(std::filesystem::path("/nonexistent/dir/file.jsonl")), IoError);
}

TEST(Records, InfinityStoredAsNull) {
  ProblemRecord r = small_corpus()[0];
  r.validation.entries[0].rel_error = std::numeric_limits<double>::infinity();
  const Json j = to_json(r);
  EXPECT_TRUE(j["validation"]["entries"][0]["rel_error"].is_null());
  EXPECT_EQ(from_json(j), r);
}

TEST(Templates, BoxedAnswersReparse) {
  for (const ProblemRecord& r : small_corpus()) {
    const std::vector<std::string> spans = boxed_spans(r.solution_latex);
    ASSERT_FALSE(spans.empty()) << r.id;
    for (const BoxedAnswer& a : r.boxed_answers) {
      EXPECT_EQ(parse(render_infix(a.expr), Dialect::Infix), a.expr);
      EXPECT_EQ(parse(render_latex(a.expr)), a.expr);
    }
  }
}

TEST(Templates, RootsNarrative) {
  const ProblemRecord r = build_record(PType::Roots, roots_params(6, 5, -1, 1), "r", 0);
  EXPECT_NE(r.solution_latex.find(R"($A=\epsilon x^{6};$ $B=- x^{5};$ $C=1.$)"), std::string::npos);
  EXPECT_NE(r.solution_latex.find(R"(We start with the balance $A+B=0$)"), std::string::npos);
  EXPECT_NE(r.solution_latex.find(R"(\boxed{ x=\left[ \frac{1}{\epsilon}\right].})"), std::string::npos);
  EXPECT_NE(r.question_latex.find(R"(P(x) =\epsilon x^{6} - x^{5} + 1.)"), std::string::npos);
  EXPECT_TRUE(r.validation.pass);
}

TEST(Templates, LaplaceEndpointBox) {
  const ProblemRecord r = build_record(PType::IntegralLaplace, laplace_endpoint(), "l", 0);
  const std::vector<std::string> spans = boxed_spans(r.solution_latex);
  ASSERT_FALSE(spans.empty());
  EXPECT_EQ(spans.back().rfind(R"(I(x) \approx)", 0), 0u);
  ASSERT_EQ(r.boxed_answers.size(), 1u);
  const Expr& e = r.boxed_answers[0].expr;
  for (double x : {20.0, 35.0}) {
    const double shown = -0.517 * std::exp(1.411 * x) / x;
    EXPECT_NEAR(eval(e, {{"x", x}}).real() / shown, 1.0, 0.002 + 0.002 * x);
  }
  EXPECT_NE(r.solution_latex.find("t_0 = [0.40]"), std::string::npos);
}

TEST(Templates, Fixed2) {
  EXPECT_EQ(fixed2(-0.001), "0.00");
  EXPECT_EQ(fixed2(11.449), "11.45");
  EXPECT_EQ(fixed2(-0.6626), "-0.66");
}

TEST(Validate, DetectsTampering) {
  ProblemRecord r = build_record(PType::Roots, roots_params(3, 1, -1, 1), "t", 0);
  EXPECT_TRUE(validate_record(r).ok);
  ProblemRecord bad = r;
  bad.boxed_answers[0].expr = Expr::integer(7);
  EXPECT_FALSE(validate_record(bad).ok);
  bad = r;
  bad.solution_latex += " ";
  EXPECT_FALSE(validate_record(bad).ok);
  bad = r;
  bad.params["n1"] = 1;
  const RecordCheck c = validate_record(bad);
  EXPECT_FALSE(c.ok);
  EXPECT_FALSE(c.issues.empty());
}
