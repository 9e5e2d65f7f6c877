#include "asymgen/odeasym.hpp"

#include <algorithm>
#include <cmath>

namespace asymgen {

namespace {

const Expr kX = Expr::var("x");

double ipow_d(double v, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= v;
  return r;
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

int sign_of(double v) { return v < 0 ? -1 : 1; }

// Derivative order carried by each nonlinear term slot.
constexpr int kOrder[3] = {2, 1, 0};

Expr random_poly(Rng& rng, int degree, int bound) {
  std::vector<Expr> terms;
  for (int d = 0; d <= degree; ++d) {
    std::int64_t c = rng.uniform_int(-bound, bound);
    if (d == degree && c == 0) c = rng.coin() ? 1 : -1;
    if (d == 0 && c == 0) c = rng.uniform_int(1, bound);
    terms.push_back(Expr::integer(c) * pow(kX, Rational(d)));
  }
  return Expr::sum(std::move(terms));
}

// Rejects denominators with a real zero on [0, x_max], checked on a fine grid
// together with the minimum magnitude.
bool nonvanishing(const Expr& den, double x_max) {
  const RealFn q = compile_real(den, "x");
  const int n = static_cast<int>(x_max * 100);
  const double q0 = q(0.0);
  if (std::abs(q0) < 0.5) return false;
  for (int i = 1; i <= n; ++i) {
    const double v = q(x_max * i / n);
    if (!std::isfinite(v) || v * q0 <= 0 || std::abs(v) < 0.05) return false;
  }
  return true;
}

RationalFn random_fn(Rng& rng, const OdeGenConfig& cfg, bool allow_cos) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    RationalFn f;
    f.num = rng.uniform_int(1, cfg.num_bound) * (rng.coin() ? 1 : -1);
    const int degree = static_cast<int>(rng.uniform_int(0, cfg.max_den_degree));
    if (degree == 0) return f;
    f.den = random_poly(rng, degree, cfg.coef_bound);
    if (allow_cos && rng.uniform_int(0, 3) == 0) f.den = f.den - cos(kX);
    if (nonvanishing(f.den, cfg.x_max)) return f;
  }
  throw GenerationExhausted("no admissible denominator");
}

}  // namespace

double refine_blowup(const OdeSpec& spec, const OdeTrace& trace) {
  if (!trace.blowup_x) throw NoDivergence("solution stays bounded on the integration range");
  // For y ~ (x* - x)^p the ratios y''/y' and y'''/y'' are -(p-1)/z and
  // -(p-2)/z, so their difference is 1/z independently of p and of any
  // additive constant in y.
  const OdeState& s = trace.ys.back();
  const double x = trace.xs.back();
  const double y3 = spec.compile()(x, s[0], s[1], s[2]);
  const double inv_z = y3 / s[2] - s[2] / s[1];
  const double z = 1.0 / inv_z;
  if (!std::isfinite(z) || z < 0 || z > 0.05 * std::max(1.0, x)) return *trace.blowup_x;
  return x + z;
}

Expr RationalFn::expr() const {
  if (num == 0) return Expr::integer(0);
  return Expr::integer(num) / den;
}

Expr OdeSpec::rhs() const {
  const Expr vars[3] = {Expr::var("y''"), Expr::var("y'"), Expr::var("y")};
  std::vector<Expr> terms;
  for (int i = 0; i < 3; ++i) terms.push_back(f[i].expr() * pow(vars[i], Rational(exps[i])));
  terms.push_back(f[3].expr());
  return Expr::sum(std::move(terms));
}

ThirdOrderRhs OdeSpec::compile() const {
  std::array<RealFn, 4> fn;
  std::array<bool, 4> live{};
  for (int i = 0; i < 4; ++i) {
    live[i] = !f[i].is_zero();
    if (live[i]) fn[i] = compile_real(f[i].expr(), "x");
  }
  const auto e = exps;
  return [fn, live, e](double x, double y, double y1, double y2) {
    double r = 0.0;
    if (live[0]) r += fn[0](x) * ipow_d(y2, e[0]);
    if (live[1]) r += fn[1](x) * ipow_d(y1, e[1]);
    if (live[2]) r += fn[2](x) * ipow_d(y, e[2]);
    if (live[3]) r += fn[3](x);
    return r;
  };
}

OdeSpec generate_ode(Rng& rng, const OdeGenConfig& cfg) {
  const int lo = cfg.exponent_range[0], hi = cfg.exponent_range[1];
  for (int attempt = 0; attempt < 1000; ++attempt) {
    OdeSpec s;
    for (int i = 0; i < 3; ++i) s.exps[i] = static_cast<int>(rng.uniform_int(lo, hi));
    for (int i = 0; i < 3; ++i) s.ics[i] = static_cast<int>(rng.uniform_int(0, 3));
    for (int i = 0; i < 3; ++i) {
      if (rng.uniform_int(0, 3) != 0) s.f[i] = random_fn(rng, cfg, false);
    }
    if (rng.uniform_int(0, 3) != 0) s.f[3] = random_fn(rng, cfg, true);

    bool nonlinear = false;
    bool degenerate = false;
    for (int i = 0; i < 3; ++i) {
      if (s.f[i].is_zero()) continue;
      nonlinear = nonlinear || s.exps[i] >= 2;
      // A nonlinear y'' term balances with p >= 1 (y stays finite at x*), and
      // (y')^3 forces p = 0: neither yields a divergent power law.
      degenerate = degenerate || (i == 0 && s.exps[i] >= 2) || (i == 1 && s.exps[i] == 3);
    }
    if (nonlinear && !degenerate) return s;
  }
  throw GenerationExhausted("ode structural prefilter");
}

Expr TaylorSolution::expr() const {
  return Expr::sum({c[0], c[1] * kX, c[2] * pow(kX, Rational(2)), c[3] * pow(kX, Rational(3))});
}

TaylorSolution small_x_taylor(const OdeSpec& spec) {
  const Expr zero = Expr::integer(0);
  std::vector<Expr> rhs_terms;
  const int derivs[3] = {spec.ics[2], spec.ics[1], spec.ics[0]};
  for (int i = 0; i < 4; ++i) {
    if (spec.f[i].is_zero()) continue;
    const Expr den0 = substitute(spec.f[i].den, "x", zero);
    if (eval(den0, {}) == Complex(0.0)) throw SingularAtOrigin("f" + std::to_string(i + 1) + " has a pole at 0");
    Expr term = Expr::integer(spec.f[i].num) / den0;
    if (i < 3) term = term * pow(Expr::integer(derivs[i]), Rational(spec.exps[i]));
    rhs_terms.push_back(term);
  }
  TaylorSolution t;
  t.c[0] = Expr::integer(spec.ics[0]);
  t.c[1] = Expr::integer(spec.ics[1]);
  t.c[2] = Expr::rational(Rational(spec.ics[2], 2));
  t.c[3] = Expr::sum(std::move(rhs_terms)) / Expr::integer(6);
  return t;
}

Dominance dominant_pair_select(const OdeSpec& spec, const OdeTrace& trace) {
  if (!trace.blowup_x || trace.xs.size() < 3) throw NoDivergence("solution stays bounded on the integration range");
  std::array<RealFn, 4> fn;
  for (int i = 0; i < 4; ++i) {
    if (!spec.f[i].is_zero()) fn[i] = compile_real(spec.f[i].expr(), "x");
  }
  auto terms = [&](std::size_t j) {
    std::array<double, 4> t{};
    const double x = trace.xs[j];
    const OdeState& s = trace.ys[j];
    const double derivs[3] = {s[2], s[1], s[0]};
    for (int i = 0; i < 4; ++i) {
      if (spec.f[i].is_zero()) continue;
      t[i] = std::abs(fn[i](x) * (i < 3 ? ipow_d(derivs[i], spec.exps[i]) : 1.0));
    }
    return t;
  };

  const std::size_t n = trace.xs.size();
  const double x_end = trace.xs.back();
  std::size_t first = n - 2;
  while (first > 0 && trace.xs[first - 1] >= 0.95 * x_end) --first;

  Dominance d;
  double width = 0.0;
  auto prev = terms(first);
  for (std::size_t j = first + 1; j < n; ++j) {
    const auto cur = terms(j);
    const double h = trace.xs[j] - trace.xs[j - 1];
    for (int i = 0; i < 4; ++i) d.average[i] += 0.5 * h * (prev[i] + cur[i]);
    width += h;
    prev = cur;
  }
  for (double& a : d.average) a /= width;

  std::array<int, 4> order{0, 1, 2, 3};
  std::sort(order.begin(), order.end(), [&](int a, int b) { return d.average[a] > d.average[b]; });
  d.term = order[0];
  if (d.term == 3) throw AmbiguousDominance("forcing term f4 dominates near the divergence");
  if (!(d.average[order[0]] >= 10.0 * d.average[order[1]])) {
    throw AmbiguousDominance("runner-up term within a factor 10 of the dominant one");
  }
  return d;
}

Rational falling(const Rational& p, int k) {
  Rational r(1);
  for (int j = 0; j < k; ++j) r *= p - Rational(j);
  return r;
}

BlowupSolution power_law_solve(int k, int m, const Expr& F, double x_star, int sign_hint) {
  if (m < 2) throw NoNonzeroSolution("a linear term cannot produce a finite-x divergence");
  BlowupSolution s;
  s.k = k;
  s.m = m;
  s.x_star = x_star;
  s.p = Rational(m * k - 3, m - 1);
  const Rational f3 = falling(s.p, 3);
  const Rational fk = falling(s.p, k).pow(m);
  if (s.p.is_zero() || f3.is_zero() || fk.is_zero()) {
    throw NoNonzeroSolution("balance forces p = " + s.p.str() + ", giving a vanishing coefficient");
  }
  const int parity = (k * m) % 2 == 0 ? 1 : -1;
  const int n = m - 1;

  if (F.is_exact_number()) {
    if (F.is_zero()) throw NoNonzeroSolution("dominant coefficient vanishes");
    const Rational q = -f3 / (F.rational_value() * Rational(parity) * fk);
    int sign = q.sign();
    if (n % 2 == 0) {
      if (q.sign() < 0) throw NoNonzeroSolution("no real coefficient for an even root");
      sign = sign_hint;
    }
    s.beta_expr = Expr::integer(sign) * pow(Expr::rational(q.abs()), Rational(1, n));
  } else {
    const double Fv = F.float_value();
    if (Fv == 0.0) throw NoNonzeroSolution("dominant coefficient vanishes");
    const double q = -f3.to_double() / (Fv * parity * fk.to_double());
    int sign = sign_of(q);
    if (n % 2 == 0) {
      if (q < 0) throw NoNonzeroSolution("no real coefficient for an even root");
      sign = sign_hint;
    }
    s.beta_expr = Expr::real(round_sig(sign * std::pow(std::abs(q), 1.0 / n), 4));
  }
  s.beta = eval(s.beta_expr, {}).real();
  s.shifted_form = s.p.den() % 2 == 1;
  s.alpha = s.shifted_form && s.p.num() % 2 != 0 ? -s.beta_expr : s.beta_expr;
  return s;
}

Expr BlowupSolution::expr() const {
  const Expr xs = Expr::real(x_star);
  Expr main = shifted_form ? alpha * pow(kX - xs, p) : beta_expr * pow(xs - kX, p);
  if (offset) main = main + Expr::real(*offset);
  return main;
}

double BlowupSolution::value(double x) const {
  const double z = x_star - x;
  if (z <= 0) return std::nan("");
  return beta * std::pow(z, p.to_double()) + offset.value_or(0.0);
}

OdeSolution solve_ode(const OdeSpec& spec, double x_max) {
  OdeSolution sol;
  sol.taylor = small_x_taylor(spec);
  OdeOptions opts;
  opts.max_steps = 200'000;
  opts.blow_threshold = 1e10;
  opts.deriv_threshold = 1e14;
  try {
    sol.trace = integrate_ode(spec.compile(), {double(spec.ics[0]), double(spec.ics[1]), double(spec.ics[2])}, x_max,
                              opts);
  } catch (const NoConvergence&) {
    throw NoDivergence("no divergence within the step budget");
  }
  sol.dominance = dominant_pair_select(spec, sol.trace);

  const int term = sol.dominance.term;
  const double x_raw = refine_blowup(spec, sol.trace);
  const double x_star = round2(x_raw);
  const RationalFn& f = spec.f[term];
  const Expr F = depends_on(f.expr(), "x") ? Expr::real(compile_real(f.expr(), "x")(x_raw)) : f.expr();

  const OdeState& last = sol.trace.ys.back();
  const Rational p = Rational(spec.exps[term] * kOrder[term] - 3, spec.exps[term] - 1);
  const int hint = p.sign() < 0 ? sign_of(last[0]) : -sign_of(last[1]);
  sol.blowup = power_law_solve(kOrder[term], spec.exps[term], F, x_star, hint);
  sol.blowup.dominant_term = term;

  const std::size_t n = sol.trace.xs.size();
  const double reliable = sol.trace.xs[n - 2];
  if (sol.blowup.p.sign() > 0) {
    const double x_ref = std::min(reliable, x_star - 0.01);
    const double y_num = sol.trace.at(x_ref)[0];
    sol.blowup.offset = round2(y_num - sol.blowup.value(x_ref));
  } else if (sol.blowup.k >= 1) {
    // A balance in derivatives of y fixes y only up to a constant. Keep it
    // when it is not negligible at the outer edge of the large-x window.
    const double x_ref = std::clamp(x_star - 0.3, 0.0, reliable);
    const double c = sol.trace.at(x_ref)[0] - sol.blowup.value(x_ref);
    const double scale = std::abs(sol.blowup.value(std::clamp(x_star - 0.2, 0.0, reliable)));
    if (std::abs(c) > 0.1 * scale) sol.blowup.offset = round2(c);
  }
  return sol;
}

ValidationReport validate_ode(const OdeSpec& spec, const OdeSolution& sol, const OdeProbes& probes) {
  (void)spec;
  ValidationReport report;
  auto push = [&](const std::string& regime, double x, double analytic, double numeric) {
    double err = std::abs(analytic - numeric) / std::max(1.0, std::abs(numeric));
    if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
    report.entries.push_back({regime, x, analytic, numeric, err});
  };
  const RealFn taylor = compile_real(sol.taylor.expr(), "x");
  for (double x : probes.taylor_points) push("small_x", x, taylor(x), sol.trace.at(x)[0]);

  const std::size_t n = sol.trace.xs.size();
  const double reliable = sol.trace.xs[n - 2];
  for (double off : probes.blowup_offsets) {
    const double x = std::max(0.0, std::min(sol.blowup.x_star - off, reliable));
    push("large_x", x, sol.blowup.value(x), sol.trace.at(x)[0]);
  }
  report.finalize();
  return report;
}

}  // namespace asymgen
