#include "asymgen/records.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace asymgen {

namespace {

constexpr const char* kNames[] = {"nondim_symbolic", "nondim_numeric", "roots",           "roots_correction",
                                  "ode",             "integral_poly",  "integral_laplace"};

// JSON has no infinity; a failed probe with a non-finite error is stored as null.
Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_from(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

Json complex_json(Complex c) { return Json::array({number_or_null(c.real()), number_or_null(c.imag())}); }

Complex complex_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex value must be [re, im]");
  return {number_from(j[0]), number_from(j[1])};
}

Json report_json(const ValidationReport& r) {
  Json entries = Json::array();
  for (const ValidationEntry& e : r.entries) {
    entries.push_back({{"regime", e.regime},
                       {"probe", number_or_null(e.probe)},
                       {"analytic", complex_json(e.analytic)},
                       {"numeric", complex_json(e.numeric)},
                       {"rel_error", number_or_null(e.rel_error)}});
  }
  return {{"entries", entries}, {"pass", r.pass}};
}

ValidationReport report_from(const Json& j) {
  ValidationReport r;
  for (const Json& e : j.at("entries")) {
    r.entries.push_back({e.at("regime").get<std::string>(), number_from(e.at("probe")), complex_from(e.at("analytic")),
                         complex_from(e.at("numeric")), number_from(e.at("rel_error"))});
  }
  r.pass = j.at("pass").get<bool>();
  return r;
}

bool same_number(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

bool same_report(const ValidationReport& a, const ValidationReport& b) {
  if (a.pass != b.pass || a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    const ValidationEntry& x = a.entries[i];
    const ValidationEntry& y = b.entries[i];
    if (x.regime != y.regime || !same_number(x.probe, y.probe) || !same_number(x.rel_error, y.rel_error) ||
        !same_number(x.analytic.real(), y.analytic.real()) || !same_number(x.analytic.imag(), y.analytic.imag()) ||
        !same_number(x.numeric.real(), y.numeric.real()) || !same_number(x.numeric.imag(), y.numeric.imag())) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string ptype_name(PType t) { return kNames[static_cast<int>(t)]; }

PType parse_ptype(std::string_view name) {
  for (PType t : kAllPTypes) {
    if (ptype_name(t) == name) return t;
  }
  throw Error("unknown problem type '" + std::string(name) + "'");
}

bool operator==(const ProblemRecord& a, const ProblemRecord& b) {
  return a.id == b.id && a.ptype == b.ptype && a.question_latex == b.question_latex &&
         a.solution_latex == b.solution_latex && a.boxed_answers == b.boxed_answers && a.params == b.params &&
         a.context == b.context && same_report(a.validation, b.validation) && a.seed == b.seed;
}

Json to_json(const ProblemRecord& r) {
  Json answers = Json::array();
  for (const BoxedAnswer& a : r.boxed_answers) answers.push_back({{"regime", a.regime}, {"expr", render_infix(a.expr)}});
  Json j = {{"schema_version", ProblemRecord::kSchemaVersion},
            {"id", r.id},
            {"ptype", ptype_name(r.ptype)},
            {"question_latex", r.question_latex},
            {"solution_latex", r.solution_latex},
            {"boxed_answers", answers},
            {"params", r.params},
            {"context", r.context ? Json(*r.context) : Json(nullptr)},
            {"validation", report_json(r.validation)},
            {"seed", r.seed}};
  return j;
}

ProblemRecord from_json(const Json& j, std::size_t line) {
  try {
    if (!j.is_object()) throw SchemaError("record must be an object", line);
    const int version = j.at("schema_version").get<int>();
    if (version != ProblemRecord::kSchemaVersion) {
      throw SchemaError("unsupported schema_version " + std::to_string(version), line);
    }
    ProblemRecord r;
    r.id = j.at("id").get<std::string>();
    if (r.id.empty()) throw SchemaError("empty id", line);
    r.ptype = parse_ptype(j.at("ptype").get<std::string>());
    r.question_latex = j.at("question_latex").get<std::string>();
    r.solution_latex = j.at("solution_latex").get<std::string>();
    for (const Json& a : j.at("boxed_answers")) {
      r.boxed_answers.push_back({a.at("regime").get<std::string>(), parse(a.at("expr").get<std::string>(), Dialect::Infix)});
    }
    if (r.boxed_answers.empty()) throw SchemaError("boxed_answers is empty", line);
    r.params = j.at("params");
    if (!j.at("context").is_null()) r.context = j.at("context").get<std::string>();
    r.validation = report_from(j.at("validation"));
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(e.what(), line);
  }
}

std::string serialize(const ProblemRecord& r) { return to_json(r).dump(); }

void write_records(std::ostream& out, const std::vector<ProblemRecord>& records) {
  for (const ProblemRecord& r : records) out << serialize(r) << '\n';
  if (!out) throw IoError("write failed");
}

void write_records(const std::vector<ProblemRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_records(out, records);
}

std::vector<ProblemRecord> read_records(std::istream& in) {
  std::vector<ProblemRecord> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw SchemaError(std::string("malformed JSON: ") + e.what(), line);
    }
    out.push_back(from_json(j, line));
  }
  if (in.bad()) throw IoError("read failed");
  return out;
}

std::vector<ProblemRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_records(in);
}

}  // namespace asymgen
