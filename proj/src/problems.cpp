#include "asymgen/problems.hpp"

#include <cmath>

namespace asymgen {

namespace {

int random_sign(Rng& rng) { return rng.coin() ? 1 : -1; }

std::pair<int, int> random_degrees(Rng& rng) {
  const int n2 = static_cast<int>(rng.uniform_int(1, 9));
  const int n1 = static_cast<int>(rng.uniform_int(n2 + 1, 10));
  return {n1, n2};
}

Json probes_json(const PolyProbes& p) { return {{"small_eps", p.small_eps}, {"large_eps", p.large_eps}}; }

PolyProbes probes_from(const Json& j) {
  PolyProbes p;
  if (j.contains("probes")) {
    p.small_eps = j.at("probes").at("small_eps").get<double>();
    p.large_eps = j.at("probes").at("large_eps").get<double>();
  }
  return p;
}

NondimPoly shape_from(const Json& j) {
  return NondimPoly{j.at("n1").get<int>(), j.at("n2").get<int>(), j.at("s2").get<int>(), j.at("s3").get<int>()};
}

Json ode_params(const OdeSpec& s) {
  Json f = Json::array();
  for (const RationalFn& r : s.f) f.push_back({{"num", r.num}, {"den", render_infix(r.den)}});
  return {{"f", f}, {"exps", s.exps}, {"ics", s.ics}};
}

OdeSpec ode_from(const Json& j) {
  OdeSpec s;
  const Json& f = j.at("f");
  if (f.size() != 4) throw DegenerateInput("ode params need four coefficient functions");
  for (std::size_t i = 0; i < 4; ++i) {
    s.f[i].num = f[i].at("num").get<std::int64_t>();
    s.f[i].den = parse(f[i].at("den").get<std::string>(), Dialect::Infix);
  }
  s.exps = j.at("exps").get<std::array<int, 3>>();
  s.ics = j.at("ics").get<std::array<int, 3>>();
  return s;
}

Json poly_integral_params(const PolyIntegralSpec& s) {
  Json terms = Json::array();
  for (const PolyTerm& t : s.terms) terms.push_back(Json::array({t.coeff, t.degree}));
  return {{"terms", terms}, {"bound", s.bound_a}};
}

PolyIntegralSpec poly_integral_from(const Json& j) {
  PolyIntegralSpec s;
  for (const Json& t : j.at("terms")) s.terms.push_back({t.at(0).get<int>(), t.at(1).get<int>()});
  if (s.terms.empty()) throw DegenerateInput("empty polynomial");
  for (std::size_t i = 1; i < s.terms.size(); ++i) {
    if (s.terms[i].degree <= s.terms[i - 1].degree) throw DegenerateInput("degrees must be distinct and ascending");
  }
  for (const PolyTerm& t : s.terms) {
    if (t.coeff <= 0) throw DegenerateInput("coefficients must be positive");
  }
  s.bound_a = j.at("bound").get<double>();
  return s;
}

Json laplace_params(const LaplaceSpec& s) {
  return {{"g", render_infix(s.g)}, {"f", render_infix(s.f)}, {"sign", s.sign}, {"a", s.a}, {"b", s.b}};
}

LaplaceSpec laplace_from(const Json& j) {
  LaplaceSpec s;
  s.g = parse(j.at("g").get<std::string>(), Dialect::Infix);
  s.f = parse(j.at("f").get<std::string>(), Dialect::Infix);
  s.sign = j.at("sign").get<int>();
  s.a = j.at("a").get<double>();
  s.b = j.at("b").get<double>();
  return s;
}

std::vector<Correction> all_corrections(const NondimPoly& p, const RootAnalysis& a) {
  std::vector<Correction> out;
  for (const Expr& r : a.small.roots) out.push_back(correction_term(p, r, EpsRegime::Small));
  for (const Expr& r : a.large.roots) out.push_back(correction_term(p, r, EpsRegime::Large));
  return out;
}

}  // namespace

PType draft_type(const Draft& d) { return static_cast<PType>(d.index()); }

double epsilon_decimal(double eps) {
  const double two_dp = std::round(eps * 100.0) / 100.0;
  if (std::abs(two_dp - eps) <= 0.1 * std::abs(eps)) return two_dp;
  return round_sig(eps, 2);
}

Json random_params(PType t, Rng& rng, const ProblemSettings& settings) {
  switch (t) {
    case PType::NondimSymbolic: {
      const auto [n1, n2] = random_degrees(rng);
      return {{"n1", n1}, {"n2", n2}, {"s2", random_sign(rng)}, {"s3", random_sign(rng)}};
    }
    case PType::NondimNumeric: {
      const auto [n1, n2] = random_degrees(rng);
      auto coef = [&] { return rng.uniform_int(1, 10) * random_sign(rng); };
      const std::int64_t c1 = coef(), c2 = coef(), c3 = coef();
      return {{"c1", c1}, {"c2", c2}, {"c3", c3}, {"n1", n1}, {"n2", n2}};
    }
    case PType::Roots:
    case PType::RootsCorrection: {
      const auto [n1, n2] = random_degrees(rng);
      return {{"n1", n1},
              {"n2", n2},
              {"s2", random_sign(rng)},
              {"s3", random_sign(rng)},
              {"probes", probes_json(settings.poly_probes)}};
    }
    case PType::Ode: return ode_params(generate_ode(rng, settings.ode));
    case PType::IntegralPoly: return poly_integral_params(generate_poly_integral(rng, settings.poly_integral));
    case PType::IntegralLaplace: return laplace_params(generate_laplace(rng, settings.laplace));
  }
  throw Error("unhandled problem type");
}

Draft solve_params(PType t, const Json& params) {
  try {
    switch (t) {
      case PType::NondimSymbolic: {
        NondimSymbolicDraft d;
        d.n1 = params.at("n1").get<int>();
        d.n2 = params.at("n2").get<int>();
        d.s2 = params.at("s2").get<int>();
        d.s3 = params.at("s3").get<int>();
        d.result = nondim_symbolic(d.n1, d.n2, d.s2, d.s3);
        return d;
      }
      case PType::NondimNumeric: {
        NondimNumericDraft d;
        d.poly = ThreeTermPoly{params.at("c1").get<std::int64_t>(), params.at("c2").get<std::int64_t>(),
                               params.at("c3").get<std::int64_t>(), params.at("n1").get<int>(),
                               params.at("n2").get<int>()};
        d.result = nondim_numeric(d.poly);
        d.decimal = epsilon_decimal(*d.result.epsilon_value);
        return d;
      }
      case PType::Roots: {
        RootsDraft d;
        d.poly = shape_from(params);
        d.probes = probes_from(params);
        d.analysis = balance_roots(d.poly, d.probes);
        return d;
      }
      case PType::RootsCorrection: {
        CorrectionDraft d;
        d.poly = shape_from(params);
        d.probes = probes_from(params);
        d.analysis = balance_roots(d.poly, d.probes);
        d.corrections = all_corrections(d.poly, d.analysis);
        return d;
      }
      case PType::Ode: {
        OdeDraft d;
        d.spec = ode_from(params);
        d.solution = solve_ode(d.spec);
        return d;
      }
      case PType::IntegralPoly: {
        PolyIntegralDraft d;
        d.spec = poly_integral_from(params);
        d.approx = approx_poly_integral(d.spec);
        return d;
      }
      case PType::IntegralLaplace: {
        LaplaceDraft d;
        d.spec = laplace_from(params);
        d.critical = laplace_critical_point(d.spec);
        d.approx = laplace_formula(d.spec, d.critical);
        return d;
      }
    }
  } catch (const Json::exception& e) {
    throw DegenerateInput(std::string("bad params: ") + e.what());
  }
  throw Error("unhandled problem type");
}

}  // namespace asymgen
