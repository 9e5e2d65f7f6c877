#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "asymgen/records.hpp"

namespace asymgen {

struct ResponseRecord {
  std::string problem_id;
  std::string raw_text;
};

struct ScoreReport {
  std::string problem_id;
  std::map<std::string, double> per_regime;
  double final = 0.0;  // mean of per_regime
  std::vector<std::string> notes;
};

/// One boxed span (or the bracketed-list fallback) split into items.
struct AnswerGroup {
  std::string text;                // span contents
  std::string regime_hint;         // "small", "large" or empty
  std::vector<std::string> items;  // top-level items, prefixes stripped
  std::vector<Expr> exprs;         // parsed items
};

/// Boxed spans of a free-form response. When there are none, the last
/// bracketed list is used instead. Unparseable items become notes.
std::vector<AnswerGroup> extract_answer_groups(const std::string& raw_text, std::vector<std::string>* notes = nullptr);

/// Parsed expressions of every boxed span, in order.
std::vector<Expr> extract_boxed(const std::string& raw_text, std::vector<std::string>* notes = nullptr);

/// Sampling ranges for the equivalence test.
struct Domain {
  std::map<std::string, std::pair<double, double>, std::less<>> ranges;
  std::map<std::string, bool, std::less<>> log_scale;
  Branch branch = Branch::Principal;

  Domain& uniform(const std::string& name, double lo, double hi);
  Domain& decades(const std::string& name, double lo, double hi);
};

/// True when the canonical forms agree or |e1 - e2| / max(1, |e2|) <= tol at
/// 20 fixed pseudo-random points of the domain.
bool equivalent(const Expr& e1, const Expr& e2, const Domain& domain, double tol = 1e-6);

/// Scores a response against a record with the rubric of its problem type.
ScoreReport score_response(const ProblemRecord& problem, const ResponseRecord& response);

/// Looks up the problem by id. Throws UnknownProblemId.
ScoreReport score_response(const std::vector<ProblemRecord>& problems, const ResponseRecord& response);

/// Line-delimited {"problem_id", "raw_text"} objects.
std::vector<ResponseRecord> read_responses(const std::filesystem::path& path);

Json score_json(const ScoreReport& s);

}  // namespace asymgen
