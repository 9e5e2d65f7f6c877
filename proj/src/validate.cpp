#include "asymgen/validate.hpp"

#include <cmath>

namespace asymgen {

namespace {

// Checks P(scale y) / |c3| against the canonical form at a few y; this
// exercises both the substitution and epsilon.
void check_identity(ValidationReport& report, const std::function<Complex(Complex)>& original, Complex scale,
                    double norm, const NondimPoly& shape, double eps) {
  for (double y : {0.5, 0.9, 1.3}) {
    report.add("identity", y, shape.eval(y, eps), original(scale * y) / norm);
  }
}

ValidationReport gate_nondim_symbolic(const NondimSymbolicDraft& d) {
  ValidationReport report;
  const std::array<std::array<double, 3>, 3> samples{{{1.7, 0.6, 2.3}, {0.4, 3.1, 1.2}, {5.0, 2.0, 0.7}}};
  for (const auto& a : samples) {
    const Bindings b{{"a1", a[0]}, {"a2", a[1]}, {"a3", a[2]}};
    const double eps = eval(d.result.epsilon, b).real();
    const Complex scale = eval(d.result.substitution, b);
    auto original = [&](Complex x) {
      return a[0] * std::pow(x, d.n1) + double(d.s2) * a[1] * std::pow(x, d.n2) + double(d.s3) * a[2];
    };
    check_identity(report, original, scale, a[2], NondimPoly{d.n1, d.n2, d.s2, d.s3}, eps);
  }
  report.finalize();
  return report;
}

ValidationReport gate_nondim_numeric(const NondimNumericDraft& d) {
  ValidationReport report;
  const ThreeTermPoly& p = d.poly;
  const double exact = *d.result.epsilon_value;
  const double s1 = p.c1 > 0 ? 1.0 : -1.0;
  auto original = [&](Complex x) {
    return s1 * (double(p.c1) * std::pow(x, p.n1) + double(p.c2) * std::pow(x, p.n2) + double(p.c3));
  };
  check_identity(report, original, eval(d.result.substitution, {}), std::abs(double(p.c3)), *d.result.shape, exact);
  report.add("epsilon", 0.0, d.decimal, exact);
  report.finalize();
  return report;
}

void add_root_entries(ValidationReport& report, const NondimPoly& poly, const std::vector<Complex>& analytic,
                      EpsRegime regime, double eps) {
  const std::vector<Complex> numeric = numeric_roots(poly.coefficients(eps));
  const std::vector<int> match = greedy_match(analytic, numeric, 1e300);
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const Complex partner = match[i] >= 0 ? numeric[static_cast<std::size_t>(match[i])] : Complex(NAN, NAN);
    report.add(regime_tag(regime), eps, analytic[i], partner);
  }
}

ValidationReport gate_roots(const RootsDraft& d) {
  ValidationReport report;
  add_root_entries(report, d.poly, eval_roots(d.analysis.small.roots, d.probes.small_eps), EpsRegime::Small,
                   d.probes.small_eps);
  add_root_entries(report, d.poly, eval_roots(d.analysis.large.roots, d.probes.large_eps), EpsRegime::Large,
                   d.probes.large_eps);
  report.finalize();
  return report;
}

ValidationReport gate_corrections(const CorrectionDraft& d) {
  ValidationReport report;
  for (EpsRegime regime : {EpsRegime::Small, EpsRegime::Large}) {
    const double eps = regime == EpsRegime::Small ? d.probes.small_eps : d.probes.large_eps;
    std::vector<Complex> improved;
    for (const Correction& c : d.corrections) {
      if (c.regime != regime) continue;
      const Bindings b{{"epsilon", eps}};
      improved.push_back(eval(c.root, b) + eval(c.delta, b));
    }
    add_root_entries(report, d.poly, improved, regime, eps);
  }
  report.finalize();
  // A correction that does not reduce |P| at its probe fails the problem.
  for (const Correction& c : d.corrections) {
    const double eps = c.regime == EpsRegime::Small ? d.probes.small_eps : d.probes.large_eps;
    if (!correction_improves(d.poly, c, eps)) report.pass = false;
  }
  return report;
}

void require_same(RecordCheck& check, bool same, const std::string& what) {
  if (!same) check.issues.push_back(what + " does not match the re-derived record");
}

}  // namespace

ValidationReport gate(const Draft& d) {
  return std::visit(
      [](const auto& v) -> ValidationReport {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NondimSymbolicDraft>) return gate_nondim_symbolic(v);
        else if constexpr (std::is_same_v<T, NondimNumericDraft>) return gate_nondim_numeric(v);
        else if constexpr (std::is_same_v<T, RootsDraft>) return gate_roots(v);
        else if constexpr (std::is_same_v<T, CorrectionDraft>) return gate_corrections(v);
        else if constexpr (std::is_same_v<T, OdeDraft>) return validate_ode(v.spec, v.solution);
        else if constexpr (std::is_same_v<T, PolyIntegralDraft>) return validate_poly_integral(v.spec, v.approx);
        else return validate_laplace(v.spec, v.approx);
      },
      d);
}

ProblemRecord build_record(PType t, const Json& params, std::string id, std::uint64_t seed) {
  const Draft draft = solve_params(t, params);
  ValidationReport report = gate(draft);
  if (!report.pass) {
    throw GateFailure("numeric check failed (max error " + format_double(round_sig(report.max_error(), 3)) + ")",
                      std::move(report));
  }
  RenderedProblem rendered = render_record(draft);
  ProblemRecord r;
  r.id = std::move(id);
  r.ptype = t;
  r.question_latex = std::move(rendered.question_latex);
  r.solution_latex = std::move(rendered.solution_latex);
  r.boxed_answers = std::move(rendered.answers);
  r.params = params;
  r.validation = std::move(report);
  r.seed = seed;
  return r;
}

RecordCheck validate_record(const ProblemRecord& r) {
  RecordCheck check;
  check.id = r.id;
  try {
    const Draft draft = solve_params(r.ptype, r.params);
    const ValidationReport report = gate(draft);
    if (!report.pass) {
      check.issues.push_back("numeric check fails (max error " + format_double(round_sig(report.max_error(), 3)) +
                             ")");
    }
    if (!r.validation.pass) check.issues.push_back("stored validation is marked as failing");
    const RenderedProblem rendered = render_record(draft);
    require_same(check, rendered.answers == r.boxed_answers, "boxed_answers");
    require_same(check, rendered.question_latex == r.question_latex, "question_latex");
    require_same(check, rendered.solution_latex == r.solution_latex, "solution_latex");
  } catch (const Error& e) {
    check.issues.push_back(std::string("cannot re-derive: ") + e.what());
  }
  check.ok = check.issues.empty();
  return check;
}

}  // namespace asymgen
