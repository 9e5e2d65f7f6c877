#include "asymgen/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "asymgen/grader.hpp"
#include "asymgen/synthesize.hpp"

namespace asymgen {

namespace {

struct Options {
  std::string type;
  int count = -1;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string in;
  std::string responses;
  int jobs = 1;
  std::optional<double> probe_small;
  std::optional<double> probe_large;
  std::string config;
  std::string contexts;
};

class UsageError : public Error {
  using Error::Error;
};

std::string minus(std::string s) {
  std::string out;
  for (char c : s) out += c == '-' ? std::string("−") : std::string(1, c);
  return out;
}

std::string num(double v, int sig) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", sig, v);
  return buf;
}

// Config file: {"seed", "jobs", "counts": {ptype: n}, "probes": {"small_eps", "large_eps"}, "contexts"}.
GenConfig load_config(const std::string& path, bool& has_seed) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw UsageError("bad config '" + path + "': " + e.what());
  }
  GenConfig cfg;
  try {
    has_seed = j.contains("seed");
    if (has_seed) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
    if (j.contains("counts")) {
      for (const auto& [name, n] : j.at("counts").items()) cfg.count(parse_ptype(name)) = n.get<int>();
    }
    if (j.contains("probes")) {
      const Json& p = j.at("probes");
      if (p.contains("small_eps")) cfg.settings.poly_probes.small_eps = p.at("small_eps").get<double>();
      if (p.contains("large_eps")) cfg.settings.poly_probes.large_eps = p.at("large_eps").get<double>();
    }
    if (j.contains("contexts")) cfg.contexts = load_contexts(j.at("contexts").get<std::string>());
  } catch (const Json::exception& e) {
    throw UsageError("bad config '" + path + "': " + e.what());
  }
  return cfg;
}

GenConfig gen_config(const Options& o) {
  std::string path = o.config;
  if (path.empty()) {
    if (const char* env = std::getenv("ASYMPGEN_CONFIG")) path = env;
  }
  GenConfig cfg;
  bool config_seed = false;
  if (!path.empty()) cfg = load_config(path, config_seed);
  if (o.seed) cfg.seed = *o.seed;
  else if (!config_seed) throw UsageError("--seed is required");
  if (o.jobs > 0) cfg.jobs = o.jobs;
  if (o.probe_small) cfg.settings.poly_probes.small_eps = *o.probe_small;
  if (o.probe_large) cfg.settings.poly_probes.large_eps = *o.probe_large;
  if (!o.contexts.empty()) cfg.contexts = load_contexts(o.contexts);
  if (!o.type.empty()) {
    const PType t = parse_ptype(o.type);
    const int n = o.count >= 0 ? o.count : cfg.count(t) > 0 ? cfg.count(t) : 1;
    cfg.counts.fill(0);
    cfg.count(t) = n;
  } else if (o.count >= 0) {
    cfg.counts.fill(o.count);
  } else if (cfg.total() == 0) {
    cfg.counts = mini_mix(cfg.seed).counts;
  }
  return cfg;
}

int cmd_generate(const Options& o, std::ostream& out, std::ostream& err) {
  const GenConfig cfg = gen_config(o);
  SynthesisResult res;
  try {
    res = synthesize(cfg);
  } catch (const GenerationExhausted& e) {
    err << "generation failed: " << e.what() << "\n";
    return kExitFailures;
  }
  if (o.out.empty()) write_records(out, res.records);
  else write_records(res.records, o.out);
  for (PType t : kAllPTypes) {
    const TypeStats& s = res.stats[static_cast<std::size_t>(t)];
    if (cfg.count(t) == 0) continue;
    err << ptype_name(t) << ": accepted " << s.accepted << ", drawn " << s.drawn << ", duplicates " << s.duplicates
        << ", rejection rate " << num(100.0 * s.rejection_rate(), 3) << "%, gate pass rate "
        << num(100.0 * s.gate_pass_rate(), 3) << "%\n";
    for (const auto& [reason, n] : s.rejected) err << "  " << n << " x " << reason << "\n";
  }
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const std::vector<ProblemRecord> records = read_records(std::filesystem::path(o.in));
  int failures = 0;
  for (const ProblemRecord& r : records) {
    const RecordCheck c = validate_record(r);
    if (c.ok) continue;
    ++failures;
    for (const std::string& issue : c.issues) err << r.id << ": " << issue << "\n";
  }
  out << records.size() << " records, " << failures << " failing\n";
  return failures ? kExitFailures : kExitOk;
}

int cmd_render(const Options& o, std::ostream& out, std::ostream&) {
  const std::vector<ProblemRecord> records = read_records(std::filesystem::path(o.in));
  const std::filesystem::path dir = o.out.empty() ? std::filesystem::path(".") : std::filesystem::path(o.out);
  std::filesystem::create_directories(dir);
  for (const ProblemRecord& r : records) {
    const std::filesystem::path file = dir / (r.id + ".tex");
    std::ofstream f(file, std::ios::binary);
    if (!f) throw IoError("cannot open '" + file.string() + "' for writing");
    f << "% " << r.id << " (" << ptype_name(r.ptype) << ")\n";
    if (r.context) f << *r.context << "\n\n";
    f << "\\textbf{Question:} " << r.question_latex << "\n\n\\textbf{Solution:} " << r.solution_latex << "\n";
  }
  out << records.size() << " files written to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_grade(const Options& o, std::ostream& out, std::ostream& err) {
  const std::vector<ProblemRecord> problems = read_records(std::filesystem::path(o.in));
  const std::vector<ResponseRecord> responses = read_responses(o.responses);
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out, std::ios::binary);
    if (!file) throw IoError("cannot open '" + o.out + "' for writing");
  }
  std::ostream& sink = o.out.empty() ? out : file;
  std::map<std::string, std::pair<double, int>> by_type;
  int failures = 0;
  for (const ResponseRecord& resp : responses) {
    ScoreReport s;
    try {
      s = score_response(problems, resp);
    } catch (const UnknownProblemId& e) {
      err << e.what() << "\n";
      ++failures;
      continue;
    }
    sink << score_json(s).dump() << "\n";
    for (const ProblemRecord& p : problems) {
      if (p.id != s.problem_id) continue;
      auto& [sum, n] = by_type[ptype_name(p.ptype)];
      sum += s.final;
      ++n;
    }
  }
  double total = 0.0;
  int count = 0;
  for (const auto& [name, acc] : by_type) {
    err << name << ": " << num(100.0 * acc.first / acc.second, 3) << "% over " << acc.second << "\n";
    total += acc.first;
    count += acc.second;
  }
  if (count) err << "overall: " << num(100.0 * total / count, 3) << "% over " << count << "\n";
  return failures ? kExitFailures : kExitOk;
}

// ---- demo ------------------------------------------------------------------

std::string blowup_text(const BlowupSolution& b) {
  const std::string p = "^{" + (b.p.den() == 1 ? std::to_string(b.p.num()) : b.p.str()) + "}";
  const double coef = b.shifted_form ? eval(b.alpha, {}).real() : b.beta;
  std::string text = b.shifted_form ? minus(num(coef, 4) + "(x-" + fixed2(b.x_star) + ")") + p
                                    : minus(num(coef, 4) + "(" + fixed2(b.x_star) + "-x)") + p;
  if (b.offset) text += (*b.offset < 0 ? " − " : " + ") + fixed2(std::abs(*b.offset));
  return text;
}

std::string laplace_text(const LaplaceApprox& a) {
  std::string text = num(a.coefficient, 3);
  if (a.kind == LaplaceKind::Interior) text += " √(π/x) e^{" + num(a.rate, 4) + "x}";
  else text += " e^{" + num(a.rate, 4) + "x}/x";
  return minus(text);
}

struct DemoCase {
  const char* title;
  PType type;
  const char* params;
};

const DemoCase kDemo[] = {
    {"Nondimensionalization, symbolic", PType::NondimSymbolic, R"J({"n1":10,"n2":9,"s2":1,"s3":1})J"},
    {"Nondimensionalization, numeric", PType::NondimNumeric, R"J({"c1":2,"c2":8,"c3":5,"n1":7,"n2":2})J"},
    {"Polynomial roots", PType::Roots,
     R"J({"n1":6,"n2":5,"s2":-1,"s3":1,"probes":{"small_eps":0.001,"large_eps":1000.0}})J"},
    {"Root corrections", PType::RootsCorrection,
     R"J({"n1":3,"n2":1,"s2":-1,"s3":1,"probes":{"small_eps":0.001,"large_eps":1000.0}})J"},
    {"Nonlinear ODE", PType::Ode,
     R"J({"f":[{"num":-1,"den":"5*x^3 - 2*x^2 - x + 2"},{"num":1,"den":"1"},{"num":-1,"den":"24*x^4 + 6*x^2 + 3"},{"num":-1,"den":"12*x^2 - cos(x) + 11"}],"exps":[1,2,1],"ics":[1,0,0]})J"},
    {"Polynomial integral", PType::IntegralPoly, R"J({"terms":[[2,6],[2,9],[5,11],[5,13]],"bound":56})J"},
    {"Laplace integral, interior maximum", PType::IntegralLaplace,
     R"J({"g":"-1.6*t^2 - 0.5*sin(t) - 1.9","f":"-2.5*t^4 - 0.8*t^3 + 1.4*t^2","sign":1,"a":-0.9,"b":0.3})J"},
    {"Laplace integral, endpoint maximum", PType::IntegralLaplace,
     R"J({"g":"-2.4*t^2 - 2.8*atan(t)","f":"1.4*t^3 - 2.6*cos(t) + 1.3*atan(t) + 0.4","sign":-1,"a":0.4,"b":0.8})J"},
};

std::string summary(const Draft& d) {
  std::ostringstream s;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NondimSymbolicDraft>) {
          s << "ε = " << minus(render_infix(x.result.epsilon)) << "\n";
        } else if constexpr (std::is_same_v<T, NondimNumericDraft>) {
          s << "ε = " << minus(render_infix(x.result.epsilon)) << ", ε ≈ " << fixed2(x.decimal) << "\n";
        } else if constexpr (std::is_same_v<T, RootsDraft>) {
          for (const auto* set : {&x.analysis.small, &x.analysis.large}) {
            s << (set == &x.analysis.small ? "small ε:" : "large ε:");
            for (const Expr& r : set->roots) s << "  " << minus(render_infix(r));
            s << "\n";
          }
        } else if constexpr (std::is_same_v<T, CorrectionDraft>) {
          for (const Correction& c : x.corrections) {
            s << "x ≈ " << minus(render_infix(c.root)) << ":  δ ≈ " << minus(render_infix(c.delta)) << "\n";
          }
        } else if constexpr (std::is_same_v<T, OdeDraft>) {
          s << "small x: y ≈ " << minus(render_infix(x.solution.taylor.expr())) << "\n";
          s << "large x: y ≈ " << blowup_text(x.solution.blowup) << "\n";
        } else if constexpr (std::is_same_v<T, PolyIntegralDraft>) {
          for (const RegimeApprox& a : x.approx) {
            s << regime_tag(a.regime) << " ε: I ≈ " << minus(render_infix(a.expr())) << "\n";
          }
        } else if constexpr (std::is_same_v<T, LaplaceDraft>) {
          s << "t0 = " << minus(fixed2(x.critical.t0)) << " (" << kind_tag(x.critical.kind) << ")\n";
          s << "I(x) ≈ " << laplace_text(x.approx) << "\n";
        }
      },
      d);
  return s.str();
}

int cmd_demo(std::ostream& out, std::ostream& err) {
  int failures = 0;
  for (const DemoCase& c : kDemo) {
    out << "== " << c.title << "\n";
    try {
      const Draft d = solve_params(c.type, Json::parse(c.params));
      const ProblemRecord r = build_record(c.type, Json::parse(c.params), "demo", 0);
      out << summary(d) << "gate max error " << num(100.0 * r.validation.max_error(), 3) << "%\n\n";
    } catch (const Error& e) {
      err << c.title << ": " << e.what() << "\n";
      ++failures;
    }
  }
  return failures ? kExitFailures : kExitOk;
}

}  // namespace

std::string demo_text() {
  std::ostringstream out, err;
  cmd_demo(out, err);
  return out.str() + err.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generate, validate and grade asymptotics problems"};
  app.require_subcommand(1);
  Options o;

  auto type_opt = [&](CLI::App* c) {
    c->add_option("--type", o.type, "Problem type");
  };
  auto* gen = app.add_subcommand("generate", "Synthesize validated problem records");
  type_opt(gen);
  gen->add_option("--count", o.count, "Records per type (or of --type)")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", o.seed, "Master seed (required unless set in the config)");
  gen->add_option("--out", o.out, "Output file; stdout when omitted");
  gen->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  gen->add_option("--probe-small-eps", o.probe_small, "Small-epsilon probe for root problems");
  gen->add_option("--probe-large-eps", o.probe_large, "Large-epsilon probe for root problems");
  gen->add_option("--config", o.config, "JSON config; ASYMPGEN_CONFIG is used when omitted");
  gen->add_option("--contexts", o.contexts, "Word-problem wrappers, one {id, context} object per line");

  auto* val = app.add_subcommand("validate", "Re-derive and re-gate stored records");
  val->add_option("--in", o.in, "Records file")->required();

  auto* ren = app.add_subcommand("render", "Write one LaTeX file per record");
  ren->add_option("--in", o.in, "Records file")->required();
  ren->add_option("--out", o.out, "Output directory");

  auto* gra = app.add_subcommand("grade", "Score free-form responses");
  gra->add_option("--in", o.in, "Records file")->required();
  gra->add_option("--responses", o.responses, "Responses file")->required();
  gra->add_option("--out", o.out, "Scores file; stdout when omitted");

  auto* demo = app.add_subcommand("demo", "Solve the worked examples");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(o, out, err);
    if (val->parsed()) return cmd_validate(o, out, err);
    if (ren->parsed()) return cmd_render(o, out, err);
    if (gra->parsed()) return cmd_grade(o, out, err);
    if (demo->parsed()) return cmd_demo(out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    const std::string what = e.what();
    if (what.rfind("unknown problem type", 0) == 0) {
      err << "usage error: " << what << "\n";
      return kExitUsage;
    }
    err << "error: " << what << "\n";
    return kExitFailures;
  }
  return kExitUsage;
}

}  // namespace asymgen
