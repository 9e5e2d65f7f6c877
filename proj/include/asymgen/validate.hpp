#pragma once

#include <string>
#include <vector>

#include "asymgen/problems.hpp"
#include "asymgen/templates.hpp"

namespace asymgen {

/// Raised when the numeric oracle disagrees with a solver's answer.
class GateFailure : public Error {
 public:
  GateFailure(const std::string& what, ValidationReport report) : Error(what), report_(std::move(report)) {}
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

/// Solves, gates and renders one candidate. Solver rejections propagate as
/// the library's Error subclasses.
ProblemRecord build_record(PType t, const Json& params, std::string id, std::uint64_t seed);

struct RecordCheck {
  std::string id;
  bool ok = false;
  std::vector<std::string> issues;
};

/// Re-derives a stored record from its params: the solver must reproduce the
/// stored answers and text, and the numeric gate must pass again.
RecordCheck validate_record(const ProblemRecord& r);

}  // namespace asymgen
