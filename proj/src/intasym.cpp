#include "asymgen/intasym.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace asymgen {

namespace {

const Expr kEps = Expr::param("epsilon");
const Expr kX = Expr::var("x");
const Expr kT = Expr::var("t");

double ipow_d(double v, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= v;
  return r;
}

double round_dp(double v, int digits) {
  const double s = std::pow(10.0, digits);
  const double r = std::round(v * s) / s;
  return r == 0.0 ? 0.0 : r;
}

// One-decimal nonzero coefficient in [-bound, bound].
Expr random_decimal(Rng& rng, double bound) {
  const auto k = static_cast<std::int64_t>(std::lround(bound * 10));
  std::int64_t v = 0;
  while (v == 0) v = rng.uniform_int(-k, k);
  return Expr::real(static_cast<double>(v) / 10.0);
}

std::vector<Expr> laplace_basis() {
  std::vector<Expr> out;
  for (int d = 1; d <= 5; ++d) out.push_back(pow(kT, Rational(d)));
  out.push_back(sin(kT));
  out.push_back(cos(kT));
  out.push_back(atan(kT));
  return out;
}

Expr random_combination(Rng& rng, int max_terms, double bound, bool allow_constant) {
  std::vector<Expr> basis = laplace_basis();
  const int n = static_cast<int>(rng.uniform_int(1, max_terms));
  std::vector<Expr> terms;
  for (int i = 0; i < n && !basis.empty(); ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(basis.size()) - 1));
    terms.push_back(random_decimal(rng, bound) * basis[j]);
    basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(j));
  }
  if (allow_constant && rng.coin()) terms.push_back(random_decimal(rng, bound));
  return Expr::sum(std::move(terms));
}

struct Compiled {
  RealFn f, df, d2f, g;
};

Compiled compile(const LaplaceSpec& spec) {
  const Expr df = differentiate(spec.f, "t");
  return {compile_real(spec.f, "t"), compile_real(df, "t"), compile_real(differentiate(df, "t"), "t"),
          compile_real(spec.g, "t")};
}

// Root of df in [lo, hi] with df(lo), df(hi) of opposite signs.
double polish_root(const RealFn& df, const RealFn& d2f, double lo, double hi) {
  double flo = df(lo);
  if (flo == 0.0) return lo;
  if (df(hi) == 0.0) return hi;
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double v = df(t);
    if (v == 0.0) return t;
    if ((v < 0) == (flo < 0)) {
      lo = t;
      flo = v;
    } else {
      hi = t;
    }
    const double slope = d2f(t);
    double next = slope != 0.0 ? t - v / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return t;
}

// Deterministic annealing search for the maximizer of h on [a, b].
double anneal_max(const RealFn& h, double a, double b, double start) {
  Rng rng(0x5eed);
  double best = start, best_v = h(start);
  double cur = start, cur_v = best_v;
  double temp = 1.0;
  const double span = b - a;
  for (int it = 0; it < 4000; ++it) {
    const double step = span * 0.1 * (1.0 - it / 4000.0) + 1e-9;
    const double cand = std::clamp(cur + (2 * rng.uniform() - 1) * step, a, b);
    const double v = h(cand);
    if (v > cur_v || rng.uniform() < std::exp((v - cur_v) / temp)) {
      cur = cand;
      cur_v = v;
    }
    if (cur_v > best_v) {
      best = cur;
      best_v = cur_v;
    }
    temp *= 0.997;
  }
  return best;
}

}  // namespace

// ---- polynomial integrals ---------------------------------------------------------

Expr PolyIntegralSpec::poly(std::string_view var) const {
  const Expr x = Expr::var(std::string(var));
  std::vector<Expr> out;
  for (const PolyTerm& t : terms) out.push_back(Expr::integer(t.coeff) * pow(x, Rational(t.degree)));
  return Expr::sum(std::move(out));
}

double PolyIntegralSpec::eval(double x) const {
  double s = 0.0;
  for (const PolyTerm& t : terms) s += t.coeff * ipow_d(x, t.degree);
  return s;
}

PolyIntegralSpec generate_poly_integral(Rng& rng, const PolyIntGenConfig& cfg) {
  std::vector<int> degrees(static_cast<std::size_t>(cfg.degree_range[1] - cfg.degree_range[0] + 1));
  std::iota(degrees.begin(), degrees.end(), cfg.degree_range[0]);
  const int max_terms = std::min<int>(cfg.max_terms, static_cast<int>(degrees.size()));
  const int n = static_cast<int>(rng.uniform_int(cfg.min_terms, max_terms));

  PolyIntegralSpec spec;
  for (int i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(degrees.size()) - 1));
    const int c = static_cast<int>(rng.uniform_int(cfg.coeff_range[0], cfg.coeff_range[1]));
    spec.terms.push_back({c, degrees[j]});
    degrees.erase(degrees.begin() + static_cast<std::ptrdiff_t>(j));
  }
  std::sort(spec.terms.begin(), spec.terms.end(), [](const PolyTerm& l, const PolyTerm& r) { return l.degree < r.degree; });
  spec.bound_a = static_cast<double>(rng.uniform_int(cfg.bound_range[0], cfg.bound_range[1]));
  return spec;
}

std::string regime_tag(IntRegime r) {
  switch (r) {
    case IntRegime::Small: return "small";
    case IntRegime::Intermediate: return "intermediate";
    case IntRegime::VeryLarge: return "very_large";
  }
  return "";
}

Expr RegimeApprox::expr() const {
  const Expr c = regime == IntRegime::VeryLarge && coefficient == std::round(coefficient)
                     ? Expr::integer(static_cast<std::int64_t>(coefficient))
                     : Expr::real(coefficient);
  return c * pow(kEps, eps_exponent);
}

double RegimeApprox::value(double eps) const { return coefficient * std::pow(eps, eps_exponent.to_double()); }

std::array<RegimeApprox, 3> approx_poly_integral(const PolyIntegralSpec& spec) {
  if (spec.terms.empty()) throw DegenerateInput("empty polynomial");
  auto from_term = [](IntRegime r, const PolyTerm& t) {
    RegimeApprox a;
    a.regime = r;
    a.width_scale = std::pow(static_cast<double>(t.coeff), -1.0 / t.degree);
    a.coefficient = round_sig(a.width_scale, 4);
    a.eps_exponent = Rational(1, t.degree) - Rational(1);
    return a;
  };
  RegimeApprox large;
  large.regime = IntRegime::VeryLarge;
  large.width_scale = spec.bound_a;
  large.coefficient = spec.bound_a;
  large.eps_exponent = Rational(-1);
  return {from_term(IntRegime::Small, spec.lowest()), from_term(IntRegime::Intermediate, spec.highest()), large};
}

std::array<double, 3> poly_integral_probes(const PolyIntegralSpec& spec) {
  const PolyTerm& lo = spec.lowest();
  const PolyTerm& hi = spec.highest();
  const double L = spec.bound_a;
  const double cross_small = lo.coeff * ipow_d(L, lo.degree);
  const double cross_large = hi.coeff * ipow_d(L, hi.degree);
  return {1e-6, std::sqrt(cross_small * cross_large), 10.0 * cross_large};
}

double poly_integral_numeric(const PolyIntegralSpec& spec, double eps) {
  const double L = spec.bound_a;
  std::vector<double> breaks;
  for (const PolyTerm* t : {&spec.lowest(), &spec.highest()}) {
    const double w = std::pow(eps / t->coeff, 1.0 / t->degree);
    if (w > 0 && w < L) breaks.push_back(w);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const auto f = [&](double x) { return 1.0 / (eps + spec.eval(x)); };
  return adaptive_quad_split(f, 0.0, L, breaks).value;
}

ValidationReport validate_poly_integral(const PolyIntegralSpec& spec, const std::array<RegimeApprox, 3>& approx) {
  ValidationReport report;
  const auto probes = poly_integral_probes(spec);
  for (std::size_t i = 0; i < 3; ++i) {
    const double eps = probes[i];
    report.add(regime_tag(approx[i].regime), eps, approx[i].value(eps), poly_integral_numeric(spec, eps));
  }
  report.finalize();
  return report;
}

// ---- Laplace integrals --------------------------------------------------------------

LaplaceSpec generate_laplace(Rng& rng, const LaplaceGenConfig& cfg) {
  LaplaceSpec spec;
  std::int64_t i = rng.uniform_int(0, 20);
  std::int64_t j = rng.uniform_int(0, 19);
  if (j >= i) ++j;
  if (j < i) std::swap(i, j);
  spec.a = static_cast<double>(i - 10) / 10.0;
  spec.b = static_cast<double>(j - 10) / 10.0;
  spec.sign = rng.coin() ? 1 : -1;
  spec.g = random_combination(rng, cfg.max_g_terms, cfg.g_coef_bound, true);
  spec.f = random_combination(rng, cfg.max_f_terms, cfg.f_coef_bound, true);
  return spec;
}

std::string kind_tag(LaplaceKind k) { return k == LaplaceKind::Interior ? "interior" : "endpoint"; }

CriticalPoint laplace_critical_point(const LaplaceSpec& spec) {
  if (!(spec.a < spec.b)) throw DegenerateInput("empty interval");
  if (!depends_on(spec.f, "t")) throw DegenerateInput("f is constant");
  const Compiled c = compile(spec);
  const double s = spec.sign;
  const RealFn h = [&](double t) { return s * c.f(t); };

  constexpr int kGrid = 2001;
  const double step = (spec.b - spec.a) / (kGrid - 1);
  std::vector<double> ts(kGrid), dv(kGrid);
  int grid_best = 0;
  for (int i = 0; i < kGrid; ++i) {
    ts[i] = i == kGrid - 1 ? spec.b : spec.a + i * step;
    dv[i] = c.df(ts[i]);
    if (h(ts[i]) > h(ts[grid_best])) grid_best = i;
  }

  CriticalPoint cp;
  for (int i = 0; i + 1 < kGrid; ++i) {
    if (dv[i] == 0.0 || (dv[i] < 0) != (dv[i + 1] < 0)) {
      if (dv[i] == 0.0 && i == 0) continue;
      const double r = polish_root(c.df, c.d2f, ts[i], ts[i + 1]);
      if (r > spec.a && r < spec.b) cp.critical.push_back(r);
    }
  }
  if (cp.critical.empty() && grid_best > 0 && grid_best < kGrid - 1) {
    const double t = anneal_max(h, spec.a, spec.b, ts[grid_best]);
    const double lo = std::max(spec.a, t - step), hi = std::min(spec.b, t + step);
    if ((c.df(lo) < 0) != (c.df(hi) < 0)) cp.critical.push_back(polish_root(c.df, c.d2f, lo, hi));
  }
  std::sort(cp.critical.begin(), cp.critical.end());
  cp.critical.erase(std::unique(cp.critical.begin(), cp.critical.end(),
                                [](double l, double r) { return std::abs(l - r) < 1e-10; }),
                    cp.critical.end());

  cp.t0 = spec.a;
  cp.kind = LaplaceKind::Endpoint;
  double best = h(spec.a);
  if (h(spec.b) > best) {
    cp.t0 = spec.b;
    best = h(spec.b);
  }
  for (double r : cp.critical) {
    if (h(r) > best) {
      best = h(r);
      cp.t0 = r;
      cp.kind = LaplaceKind::Interior;
    }
  }

  if (cp.kind == LaplaceKind::Interior && std::abs(c.d2f(cp.t0)) < 1e-8) {
    throw DegenerateMax("f'' vanishes at the interior maximum");
  }
  if (cp.kind == LaplaceKind::Endpoint && std::abs(c.df(cp.t0)) < 1e-8) {
    throw DegenerateMax("f' vanishes at the endpoint maximum");
  }
  return cp;
}

Expr LaplaceApprox::expr() const {
  const Expr growth = exp(Expr::real(rate) * kX);
  if (kind == LaplaceKind::Interior) return Expr::real(coefficient) * sqrt(Expr::pi() / kX) * growth;
  return Expr::real(coefficient) * growth / kX;
}

double LaplaceApprox::scaled_value(double x) const {
  const double c = kind == LaplaceKind::Interior ? coefficient * std::sqrt(M_PI) : coefficient;
  return c * std::pow(x, x_power.to_double());
}

LaplaceApprox laplace_formula(const LaplaceSpec& spec, const CriticalPoint& cp) {
  const Compiled c = compile(spec);
  const double g0 = c.g(cp.t0);
  if (std::abs(g0) < 1e-12) throw ZeroAmplitude("g(t0) = 0");

  LaplaceApprox out;
  out.kind = cp.kind;
  out.t0 = cp.t0;
  const double rate = spec.sign * c.f(cp.t0);
  out.rate = (std::abs(rate) < 1.0 ? round_sig(rate, 4) : round_dp(rate, 3)) + 0.0;
  if (cp.kind == LaplaceKind::Interior) {
    const double curv = std::abs(c.d2f(cp.t0));
    if (curv < 1e-8) throw DegenerateMax("f'' vanishes at the interior maximum");
    out.coefficient = round_sig(g0 * std::sqrt(2.0 / curv), 4);
    out.x_power = Rational(-1, 2);
  } else {
    const double slope = std::abs(c.df(cp.t0));
    if (slope < 1e-8) throw DegenerateMax("f' vanishes at the endpoint maximum");
    out.coefficient = round_sig(g0 / slope, 4);
    out.x_power = Rational(-1);
  }
  return out;
}

double laplace_shifted_numeric(const LaplaceSpec& spec, double t0, double x) {
  const Compiled c = compile(spec);
  const double s = spec.sign;
  const double f0 = c.f(t0);
  const auto integrand = [&](double t) { return c.g(t) * std::exp(s * x * (c.f(t) - f0)); };
  std::vector<double> breaks;
  if (t0 > spec.a && t0 < spec.b) breaks.push_back(t0);
  return adaptive_quad_split(integrand, spec.a, spec.b, breaks).value;
}

ValidationReport validate_laplace(const LaplaceSpec& spec, const LaplaceApprox& approx, const LaplaceProbes& probes) {
  const double exact_rate = spec.sign * compile_real(spec.f, "t")(approx.t0);
  ValidationReport report;
  for (double x : probes.xs) {
    // Both sides carry the common factor e^(exact_rate x), divided out here.
    const double analytic = approx.scaled_value(x) * std::exp((approx.rate - exact_rate) * x);
    report.add("large_x", x, analytic, laplace_shifted_numeric(spec, approx.t0, x));
  }
  report.finalize();
  return report;
}

}  // namespace asymgen
