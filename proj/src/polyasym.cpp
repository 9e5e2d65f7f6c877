#include "asymgen/polyasym.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "asymgen/numoracle.hpp"

namespace asymgen {

namespace {

Expr eps_param() { return Expr::param("epsilon"); }

Expr monomial(const Expr& coef, const Expr& x, int n) { return coef * pow(x, Rational(n)); }

Expr phase(std::int64_t k, std::int64_t d) { return pow(Expr::integer(-1), Rational(2 * k, d)); }

// The d-th roots of `radicand` (times a power of epsilon) in principal-branch form.
std::vector<Expr> all_roots(const Expr& radicand, int d) {
  std::vector<Expr> out;
  const Expr principal = pow(radicand, Rational(1, d));
  for (int k = 0; k < d; ++k) out.push_back(phase(k, d) * principal);
  return out;
}

std::int64_t binomial(int n, int k) {
  std::int64_t r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// (base + delta)^n expanded by the binomial theorem.
Expr binomial_expand(const Expr& base, const Expr& delta, int n) {
  std::vector<Expr> terms;
  for (int j = 0; j <= n; ++j) {
    terms.push_back(Expr::integer(binomial(n, j)) * pow(base, Rational(n - j)) * pow(delta, Rational(j)));
  }
  return Expr::sum(std::move(terms));
}

std::array<double, 3> term_magnitudes(const NondimPoly& p, Complex x, double eps) {
  return {eps * std::pow(std::abs(x), p.n1), std::pow(std::abs(x), p.n2), 1.0};
}

double magnitude(const std::array<double, 3>& m, Term t) { return m[static_cast<int>(t)]; }

bool consistent_at(const NondimPoly& p, const Balance& b, const std::vector<Expr>& roots, double eps,
                   double ratio) {
  for (const Complex x : eval_roots(roots, eps)) {
    const auto m = term_magnitudes(p, x, eps);
    const double kept = std::min(magnitude(m, b.first), magnitude(m, b.second));
    // Relative slack keeps exact-threshold cases (neglected == ratio * kept) on the valid side.
    if (magnitude(m, b.neglected) > ratio * kept * (1 + 1e-9)) return false;
  }
  return true;
}

void require_distinct(const RegimeRoots& r, double eps) {
  const auto values = eval_roots(r.roots, eps);
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      const double scale = std::max({1.0, std::abs(values[i]), std::abs(values[j])});
      if (std::abs(values[i] - values[j]) < 1e-9 * scale) {
        throw InconsistentCover("repeated root in the " + regime_tag(r.regime) + " regime");
      }
    }
  }
}

}  // namespace

Expr ThreeTermPoly::expr(std::string_view var) const {
  const Expr x = Expr::var(std::string(var));
  return monomial(Expr::integer(c1), x, n1) + monomial(Expr::integer(c2), x, n2) + Expr::integer(c3);
}

Expr NondimPoly::expr(std::string_view var) const {
  const Expr x = Expr::symbol(var);
  return monomial(eps_param(), x, n1) + monomial(Expr::integer(s2), x, n2) + Expr::integer(s3);
}

Complex NondimPoly::eval(Complex x, double eps) const {
  return eps * std::pow(x, n1) + double(s2) * std::pow(x, n2) + double(s3);
}

Complex NondimPoly::derivative(Complex x, double eps) const {
  return eps * double(n1) * std::pow(x, n1 - 1) + double(s2 * n2) * std::pow(x, n2 - 1);
}

std::vector<Complex> NondimPoly::coefficients(double eps) const {
  std::vector<Complex> c(static_cast<std::size_t>(n1) + 1, 0.0);
  c[0] = double(s3);
  c[static_cast<std::size_t>(n2)] = double(s2);
  c[static_cast<std::size_t>(n1)] = eps;
  return c;
}

NondimResult nondim_symbolic(int n1, int n2, int s2, int s3) {
  if (!(0 < n2 && n2 < n1 && n1 <= 10)) throw DegenerateInput("degrees must satisfy 0 < n2 < n1 <= 10");
  if (std::abs(s2) != 1 || std::abs(s3) != 1) throw DegenerateInput("signs must be +1 or -1");
  const Expr a1 = Expr::param("a1"), a2 = Expr::param("a2"), a3 = Expr::param("a3");
  const Expr x = Expr::var("x"), y = Expr::var("y");
  const Expr poly = monomial(a1, x, n1) + monomial(Expr::integer(s2) * a2, x, n2) + Expr::integer(s3) * a3;

  NondimResult out;
  out.substitution = pow(a3 / a2, Rational(1, n2));
  out.substituted = substitute(poly, "x", y * out.substitution);
  out.nondim_poly = Expr::sum({coefficient(out.substituted, "y", Rational(n1)) / a3 * pow(y, Rational(n1)),
                               coefficient(out.substituted, "y", Rational(n2)) / a3 * pow(y, Rational(n2)),
                               coefficient(out.substituted, "y", Rational(0)) / a3});
  out.epsilon = coefficient(out.nondim_poly, "y", Rational(n1));
  out.shape = NondimPoly{n1, n2, s2, s3};
  return out;
}

NondimResult nondim_numeric(const ThreeTermPoly& p) {
  if (p.c1 == 0 || p.c2 == 0 || p.c3 == 0) throw DegenerateInput("zero coefficient");
  if (!(0 < p.n2 && p.n2 < p.n1 && p.n1 <= 10)) throw DegenerateInput("degrees must satisfy 0 < n2 < n1 <= 10");
  const std::int64_t m1 = std::abs(p.c1), m2 = std::abs(p.c2), m3 = std::abs(p.c3);
  const int s1 = p.c1 > 0 ? 1 : -1;
  const int s2 = p.c2 > 0 ? 1 : -1;
  const int s3 = p.c3 > 0 ? 1 : -1;

  NondimResult out;
  const Expr y = Expr::var("y");
  out.substitution = pow(Expr::rational(Rational(m3, m2)), Rational(1, p.n2));
  const ThreeTermPoly mags{m1, m2, m3, p.n1, p.n2};
  out.substituted = substitute(mags.expr(), "x", y * out.substitution);
  out.epsilon = coefficient(out.substituted, "y", Rational(p.n1)) / Expr::integer(m3);
  out.nondim_poly = out.epsilon * pow(y, Rational(p.n1)) + Expr::integer(s1 * s2) * pow(y, Rational(p.n2)) +
                    Expr::integer(s1 * s3);
  out.epsilon_value = eval(out.epsilon, {}).real();
  out.shape = NondimPoly{p.n1, p.n2, s1 * s2, s1 * s3};
  return out;
}

// ---- dominant balance ---------------------------------------------------------

std::string regime_tag(EpsRegime r) { return r == EpsRegime::Small ? "small_eps" : "large_eps"; }

char term_letter(Term t) { return "ABC"[static_cast<int>(t)]; }

std::string Balance::name() const { return std::string{term_letter(first), '+', term_letter(second)}; }

std::array<Balance, 3> all_balances() {
  return {Balance{Term::A, Term::B, Term::C}, Balance{Term::B, Term::C, Term::A}, Balance{Term::A, Term::C, Term::B}};
}

std::vector<Expr> solve_balance(const NondimPoly& p, const Balance& b) {
  const Expr eps = eps_param();
  if (b.neglected == Term::C) {
    // eps x^n1 + s2 x^n2 = 0  =>  x^(n1-n2) = -s2 / eps
    return all_roots(Expr::integer(-p.s2) / eps, p.n1 - p.n2);
  }
  if (b.neglected == Term::A) {
    // s2 x^n2 + s3 = 0  =>  x^n2 = -s2 s3
    return all_roots(Expr::integer(-p.s2 * p.s3), p.n2);
  }
  // eps x^n1 + s3 = 0  =>  x^n1 = -s3 / eps
  return all_roots(Expr::integer(-p.s3) / eps, p.n1);
}

std::pair<bool, bool> check_consistency(const NondimPoly& p, const Balance& b, const std::vector<Expr>& roots,
                                        const PolyProbes& probes) {
  return {consistent_at(p, b, roots, probes.small_eps, probes.ratio_threshold),
          consistent_at(p, b, roots, probes.large_eps, probes.ratio_threshold)};
}

RootAnalysis balance_roots(const NondimPoly& p, const PolyProbes& probes) {
  if (!(0 < p.n2 && p.n2 < p.n1)) throw DegenerateInput("degrees must satisfy 0 < n2 < n1");
  RootAnalysis out;
  out.small.regime = EpsRegime::Small;
  out.large.regime = EpsRegime::Large;
  const Expr x = Expr::var("x");
  const Expr terms[3] = {monomial(eps_param(), x, p.n1), monomial(Expr::integer(p.s2), x, p.n2),
                         Expr::integer(p.s3)};
  for (const Balance& b : all_balances()) {
    BalanceRoots br;
    br.balance = b;
    br.reduced = terms[static_cast<int>(b.first)] + terms[static_cast<int>(b.second)];
    br.roots = solve_balance(p, b);
    std::tie(br.valid_small, br.valid_large) = check_consistency(p, b, br.roots, probes);
    if (br.valid_small) {
      for (const Expr& r : br.roots) {
        out.small.roots.push_back(r);
        out.small.provenance.push_back(b);
      }
    }
    if (br.valid_large) {
      for (const Expr& r : br.roots) {
        out.large.roots.push_back(r);
        out.large.provenance.push_back(b);
      }
    }
    out.balances.push_back(std::move(br));
  }
  for (const RegimeRoots* r : {&out.small, &out.large}) {
    if (r->roots.size() != static_cast<std::size_t>(p.n1)) {
      throw InconsistentCover(regime_tag(r->regime) + " regime has " + std::to_string(r->roots.size()) +
                              " roots, expected " + std::to_string(p.n1));
    }
  }
  require_distinct(out.small, probes.small_eps);
  require_distinct(out.large, probes.large_eps);
  return out;
}

// ---- corrections -----------------------------------------------------------------

Correction correction_term(const NondimPoly& p, const Expr& root, EpsRegime regime) {
  const Expr eps = eps_param();
  const Expr delta = Expr::var("delta");
  const Expr s2 = Expr::integer(p.s2), s3 = Expr::integer(p.s3);

  Correction c;
  c.root = root;
  c.regime = regime;
  c.substituted = monomial(eps, root + delta, p.n1) + monomial(s2, root + delta, p.n2) + s3;
  c.expanded = eps * binomial_expand(root, delta, p.n1) + s2 * binomial_expand(root, delta, p.n2) + s3;

  const Expr value = monomial(eps, root, p.n1) + monomial(s2, root, p.n2) + s3;
  const Expr slope = Expr::integer(p.n1) * eps * pow(root, Rational(p.n1 - 1)) +
                     Expr::integer(p.n2) * s2 * pow(root, Rational(p.n2 - 1));
  c.linear = value + slope * delta;
  if (value.is_zero()) {
    c.delta = Expr::integer(0);
    return c;
  }
  if (slope.is_zero()) throw SingularCorrection("P'(root) vanishes identically");
  c.delta = -value / slope;
  return c;
}

bool correction_improves(const NondimPoly& p, const Correction& c, double eps) {
  const Bindings b{{"epsilon", eps}};
  const Complex x = eval(c.root, b);
  const Complex d = eval(c.delta, b);
  // With delta = -P/P', P(x) = -P'(x) delta and P(x + delta) is the Taylor
  // tail from second order on. Evaluating both this way avoids the
  // cancellation in P(x) at large |x|, where delta can fall below one ulp.
  auto binom = [](int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
  };
  Complex tail = 0.0;
  for (int k = 2; k <= p.n1; ++k) {
    Complex coef = eps * binom(p.n1, k) * std::pow(x, p.n1 - k);
    if (k <= p.n2) coef += double(p.s2) * binom(p.n2, k) * std::pow(x, p.n2 - k);
    tail += coef * std::pow(d, k);
  }
  return std::abs(tail) < std::abs(p.derivative(x, eps) * d);
}

std::vector<Complex> eval_roots(const std::vector<Expr>& roots, double eps) {
  const Bindings b{{"epsilon", eps}};
  std::vector<Complex> out;
  out.reserve(roots.size());
  for (const Expr& r : roots) out.push_back(eval(r, b));
  return out;
}

}  // namespace asymgen
