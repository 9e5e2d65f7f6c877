#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "asymgen/cli.hpp"
#include "asymgen/records.hpp"

using namespace asymgen;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("asymgen_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

}  // namespace

TEST_F(Cli, GenerateThenValidate) {
  const Invocation g = run({"generate", "--type", "roots", "--count", "10", "--seed", "42", "--out", path("r.jsonl")});
  ASSERT_EQ(g.code, kExitOk) << g.err;
  const std::vector<ProblemRecord> records = read_records(std::filesystem::path(path("r.jsonl")));
  ASSERT_EQ(records.size(), 10u);
  for (const ProblemRecord& r : records) {
    EXPECT_EQ(r.ptype, PType::Roots);
    EXPECT_TRUE(r.validation.pass);
  }
  EXPECT_NE(g.err.find("rejection rate"), std::string::npos);
  EXPECT_EQ(run({"validate", "--in", path("r.jsonl")}).code, kExitOk);
}

TEST_F(Cli, ValidateFlagsTamperedRecords) {
  ASSERT_EQ(run({"generate", "--type", "integral_poly", "--count", "3", "--seed", "1", "--out", path("p.jsonl")}).code,
            kExitOk);
  std::string text = slurp(path("p.jsonl"));
  const std::size_t pos = text.find("\\\\boxed");
  ASSERT_NE(pos, std::string::npos);
  text.insert(pos, "tampered ");
  std::ofstream(path("p.jsonl"), std::ios::binary) << text;
  const Invocation v = run({"validate", "--in", path("p.jsonl")});
  EXPECT_EQ(v.code, kExitFailures);
  EXPECT_NE(v.err.find("integral_poly-0000"), std::string::npos);
}

TEST_F(Cli, SeedDeterminismEndToEnd) {
  for (const char* name : {"a.jsonl", "b.jsonl"}) {
    ASSERT_EQ(run({"generate", "--count", "2", "--seed", "7", "--jobs", "3", "--out", path(name)}).code, kExitOk);
  }
  ASSERT_EQ(run({"generate", "--count", "2", "--seed", "8", "--out", path("c.jsonl")}).code, kExitOk);
  EXPECT_EQ(slurp(path("a.jsonl")), slurp(path("b.jsonl")));
  EXPECT_NE(slurp(path("a.jsonl")), slurp(path("c.jsonl")));
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"generate", "--count", "2"}).code, kExitUsage);
  EXPECT_EQ(run({"generate", "--seed", "1", "--colour", "red"}).code, kExitUsage);
  EXPECT_EQ(run({"generate", "--seed", "1", "--type", "sudoku"}).code, kExitUsage);
  EXPECT_EQ(run({"validate"}).code, kExitUsage);
  EXPECT_EQ(run({"grade", "--in", "x"}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST_F(Cli, MissingInputIsAFailure) {
  const Invocation v = run({"validate", "--in", path("absent.jsonl")});
  EXPECT_EQ(v.code, kExitFailures);
  EXPECT_NE(v.err.find("cannot open"), std::string::npos);
}

TEST_F(Cli, ConfigFileAndOverrides) {
  std::ofstream(path("cfg.json")) << R"({"seed": 5, "counts": {"nondim_numeric": 3, "ode": 1}, "probes": {"small_eps": 0.002}})";
  ASSERT_EQ(run({"generate", "--config", path("cfg.json"), "--out", path("a.jsonl")}).code, kExitOk);
  const std::vector<ProblemRecord> a = read_records(std::filesystem::path(path("a.jsonl")));
  ASSERT_EQ(a.size(), 4u);
  EXPECT_NE(a[0].seed, 0u);
  ASSERT_EQ(run({"generate", "--config", path("cfg.json"), "--seed", "6", "--out", path("b.jsonl")}).code, kExitOk);
  EXPECT_NE(slurp(path("a.jsonl")), slurp(path("b.jsonl")));

  std::ofstream(path("roots.json")) << R"({"seed": 5, "counts": {"roots": 2}, "probes": {"small_eps": 0.002}})";
  ASSERT_EQ(run({"generate", "--config", path("roots.json"), "--out", path("r.jsonl")}).code, kExitOk);
  const std::vector<ProblemRecord> r = read_records(std::filesystem::path(path("r.jsonl")));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_DOUBLE_EQ(r[0].params["probes"]["small_eps"].get<double>(), 0.002);
}

TEST_F(Cli, ConfigFromEnvironment) {
  std::ofstream(path("env.json")) << R"({"seed": 3, "counts": {"integral_poly": 2}})";
  ::setenv("ASYMPGEN_CONFIG", path("env.json").c_str(), 1);
  const Invocation g = run({"generate", "--out", path("e.jsonl")});
  ::unsetenv("ASYMPGEN_CONFIG");
  ASSERT_EQ(g.code, kExitOk) << g.err;
  EXPECT_EQ(read_records(std::filesystem::path(path("e.jsonl"))).size(), 2u);
}

TEST_F(Cli, RenderWritesOneFilePerRecord) {
  ASSERT_EQ(run({"generate", "--type", "ode", "--count", "2", "--seed", "4", "--out", path("o.jsonl")}).code, kExitOk);
  ASSERT_EQ(run({"render", "--in", path("o.jsonl"), "--out", path("tex")}).code, kExitOk);
  const std::string tex = slurp(dir_ / "tex" / "ode-0001.tex");
  EXPECT_NE(tex.find("\\boxed{"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "tex" / "ode-0000.tex"));
}

TEST_F(Cli, GradeScoresAndReportsUnknownIds) {
  ASSERT_EQ(run({"generate", "--type", "roots", "--count", "2", "--seed", "9", "--out", path("r.jsonl")}).code,
            kExitOk);
  const std::vector<ProblemRecord> records = read_records(std::filesystem::path(path("r.jsonl")));
  {
    std::ofstream out(path("resp.jsonl"));
    out << Json{{"problem_id", records[0].id}, {"raw_text", records[0].solution_latex}}.dump() << "\n";
    out << Json{{"problem_id", records[1].id}, {"raw_text", "no idea"}}.dump() << "\n";
  }
  Invocation g = run({"grade", "--in", path("r.jsonl"), "--responses", path("resp.jsonl")});
  EXPECT_EQ(g.code, kExitOk) << g.err;
  std::istringstream lines(g.out);
  std::string first, second;
  std::getline(lines, first);
  std::getline(lines, second);
  EXPECT_DOUBLE_EQ(Json::parse(first)["final"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(Json::parse(second)["final"].get<double>(), 0.0);
  EXPECT_NE(g.err.find("roots: 50% over 2"), std::string::npos) << g.err;

  std::ofstream(path("resp.jsonl"), std::ios::app) << R"({"problem_id": "ghost", "raw_text": "1"})" << "\n";
  g = run({"grade", "--in", path("r.jsonl"), "--responses", path("resp.jsonl"), "--out", path("scores.jsonl")});
  EXPECT_EQ(g.code, kExitFailures);
  EXPECT_NE(g.err.find("ghost"), std::string::npos);
}

TEST(CliDemo, WorkedAnswers) {
  const Invocation d = run({"demo"});
  EXPECT_EQ(d.code, kExitOk) << d.err;
  EXPECT_NE(d.out.find("ε ≈ 0.08"), std::string::npos);
  EXPECT_NE(d.out.find("−6(x−11.45)^{-1}"), std::string::npos);
  EXPECT_NE(d.out.find("−0.517 e^{1.411x}/x"), std::string::npos);
  EXPECT_NE(d.out.find("−1.21 √(π/x) e^{0.3655x}"), std::string::npos);
  EXPECT_EQ(d.out, demo_text());
}
