#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "asymgen/expr.hpp"
#include "asymgen/numoracle.hpp"

namespace asymgen {

using Json = nlohmann::json;

enum class PType { NondimSymbolic, NondimNumeric, Roots, RootsCorrection, Ode, IntegralPoly, IntegralLaplace };

inline constexpr PType kAllPTypes[] = {PType::NondimSymbolic, PType::NondimNumeric, PType::Roots,
                                       PType::RootsCorrection, PType::Ode,           PType::IntegralPoly,
                                       PType::IntegralLaplace};
inline constexpr std::size_t kPTypeCount = std::size(kAllPTypes);

std::string ptype_name(PType t);
/// Throws Error on an unknown name.
PType parse_ptype(std::string_view name);

struct BoxedAnswer {
  std::string regime;
  Expr expr;

  friend bool operator==(const BoxedAnswer&, const BoxedAnswer&) = default;
};

struct ProblemRecord {
  static constexpr int kSchemaVersion = 1;

  std::string id;
  PType ptype = PType::Roots;
  std::string question_latex;
  std::string solution_latex;
  std::vector<BoxedAnswer> boxed_answers;
  Json params = Json::object();
  std::optional<std::string> context;
  ValidationReport validation;
  std::uint64_t seed = 0;

  friend bool operator==(const ProblemRecord& a, const ProblemRecord& b);
};

Json to_json(const ProblemRecord& r);
/// Throws SchemaError tagged with `line`.
ProblemRecord from_json(const Json& j, std::size_t line = 0);

/// One record as a single JSON line (no trailing newline).
std::string serialize(const ProblemRecord& r);

void write_records(std::ostream& out, const std::vector<ProblemRecord>& records);
void write_records(const std::vector<ProblemRecord>& records, const std::filesystem::path& path);

/// Blank lines are skipped; any other malformed line raises SchemaError with
/// its 1-based line number.
std::vector<ProblemRecord> read_records(std::istream& in);
std::vector<ProblemRecord> read_records(const std::filesystem::path& path);

}  // namespace asymgen
