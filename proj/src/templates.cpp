#include "asymgen/templates.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace asymgen {

namespace {

std::string tex(const Expr& e) { return render_latex(round_floats(e, 10)); }

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string tex_list(const std::vector<Expr>& xs) {
  std::vector<std::string> parts;
  for (const Expr& x : xs) parts.push_back(tex(x));
  return join(parts, ", \\  ");
}

std::string number_text(double v) { return format_double(v); }

std::string truth(bool b) { return b ? "true" : "false"; }

// ---- polynomial family ------------------------------------------------------------

std::string term_name(Term t) { return std::string(1, term_letter(t)); }

std::string validity_conclusion(bool small, bool large) {
  if (small && large) return "Therefore, these roots are valid in the limit of both small and large positive $\\epsilon$.";
  if (small) return "Therefore, these roots are valid in the limit of small positive $\\epsilon$ only.";
  if (large) return "Therefore, these roots are valid in the limit of large positive $\\epsilon$ only.";
  return "Therefore, these roots are not valid in either limit and are discarded.";
}

std::string roots_question(const NondimPoly& p, bool corrections) {
  std::string q = "Consider the polynomial\\[P(x) =" + tex(p.expr()) +
                  ".\\] \nFind first order approximations for all roots of the polynomial in the limit of small "
                  "positive $\\epsilon$ and large positive $\\epsilon$.";
  if (corrections) {
    q += " Use a series expansion to calculate improved formulae for these roots to order 1 i.e. calculate "
         "$\\mathcal{O}(1)$ corrections for each root.";
  }
  return q;
}

std::string roots_body(const NondimPoly& p, const RootAnalysis& a) {
  const Expr x = Expr::var("x");
  const Expr eps = Expr::param("epsilon");
  const Expr terms[3] = {eps * pow(x, Rational(p.n1)), Expr::integer(p.s2) * pow(x, Rational(p.n2)),
                         Expr::integer(p.s3)};
  std::ostringstream s;
  s << "We begin by equating the polynomial to zero to solve for the roots: $P(x) = 0.$ This problem can be "
       "rewritten in the form $A+B+C=0$, where: $A="
    << tex(terms[0]) << ";$ $B=" << tex(terms[1]) << ";$ $C=" << tex(terms[2]) << ".$\n\n";
  s << "This problem has no analytical solutions, so we find approximate solutions to the roots by considering the "
       "three possible dominant balances. For each dominant balance, we find the roots of the resulting equation and "
       "evaluate whether each balance is self-consistent for small or large positive $\\epsilon$. \\vspace{1em}\n\n";
  const char* openers[3] = {"We start with", "Next we examine", "Finally, we examine"};
  for (std::size_t i = 0; i < a.balances.size(); ++i) {
    const BalanceRoots& b = a.balances[i];
    const std::string k1 = term_name(b.balance.first), k2 = term_name(b.balance.second),
                      nb = term_name(b.balance.neglected);
    s << openers[i] << " the balance $" << k1 << "+" << k2 << "=0$, assuming that $|" << nb
      << "|$ is negligible when compared to $|" << k1 << "|$ and $|" << k2
      << "|$. Solving this for $x$ in terms of $\\epsilon$ gives us " << b.roots.size()
      << " non-zero roots: \n\\[" << tex(b.reduced) << "=0\\]\\[ \\implies \\boxed{ x=\\left[ " << tex_list(b.roots)
      << "\\right].}\\]\n";
    s << "To verify that these roots are consistent with the assumption that $|" << k1 << "|, |" << k2 << "| \\gg |"
      << nb << "|,$ we substitute these found roots back into the terms $A$, $B$, and $C$ and compare their "
               "magnitudes. Using this method, we find that it is "
      << truth(b.valid_small) << " that these roots are valid for small $\\epsilon$, while validity for large "
      << "$\\epsilon$ is " << truth(b.valid_large) << ".\n\n\\underline{"
      << validity_conclusion(b.valid_small, b.valid_large) << "}\\vspace{1em}\n\n";
  }
  s << "By the Fundamental Theorem of Algebra, a polynomial of degree " << p.n1 << " has exactly " << p.n1
    << " roots. We have found " << a.small.roots.size()
    << " roots that are valid in the limit of small positive $\\epsilon$ and " << a.large.roots.size()
    << " roots valid in the limit of large positive $\\epsilon$. Our method therefore provides a complete solution to "
       "the problem, finding the correct number of roots in each $\\epsilon$ regime.\n\n";
  return s.str();
}

RenderedProblem render_nondim_symbolic(const NondimSymbolicDraft& d) {
  RenderedProblem r;
  const Expr a1 = Expr::param("a1"), a2 = Expr::param("a2"), a3 = Expr::param("a3");
  const Expr x = Expr::var("x");
  const Expr poly =
      a1 * pow(x, Rational(d.n1)) + Expr::integer(d.s2) * a2 * pow(x, Rational(d.n2)) + Expr::integer(d.s3) * a3;
  const NondimPoly target{d.n1, d.n2, d.s2, d.s3};
  r.question_latex = "Nondimensionalize the polynomial\\[" + tex(poly) + "\\]into one of the form $" +
                     tex(target.expr("y")) + ".$ Express $\\epsilon$ as a function of $a_1$, $a_2$, and $a_3.$";
  std::ostringstream s;
  s << "We begin with the substitution\\[x=y " << tex(d.result.substitution) << "\\]\n";
  s << "This gives the expression\\[" << tex(d.result.substituted) << "\\]\n";
  s << "Divide by $a_3$, the magnitude of the coefficient remaining in front of the constant, leaving us with the "
       "nondimensionalized polynomial with coefficients in terms of $a_1$, $a_2$, and $a_3$:\\[ \\boxed{"
    << tex(d.result.nondim_poly) << ".}\\]By inspection, we can see that\\[ \\boxed{\\epsilon="
    << tex(d.result.epsilon) << ".}\\]";
  r.solution_latex = s.str();
  return r;
}

RenderedProblem render_nondim_numeric(const NondimNumericDraft& d) {
  RenderedProblem r;
  const ThreeTermPoly& p = d.poly;
  const int s1 = p.c1 > 0 ? 1 : -1;
  const int s2 = (p.c2 > 0 ? 1 : -1) * s1;
  const int s3 = (p.c3 > 0 ? 1 : -1) * s1;
  const NondimResult sym = nondim_symbolic(p.n1, p.n2, s2, s3);
  const Expr a1 = Expr::param("a1"), a2 = Expr::param("a2"), a3 = Expr::param("a3");
  const Expr x = Expr::var("x");
  const Expr sym_poly =
      a1 * pow(x, Rational(p.n1)) + Expr::integer(s2) * a2 * pow(x, Rational(p.n2)) + Expr::integer(s3) * a3;

  r.question_latex = "Nondimensionalize the polynomial \\[P(x) = " + tex(p.expr()) +
                     "\\] into a polynomial of the form $\\epsilon y^{" + std::to_string(p.n1) + "} \\pm y^{" +
                     std::to_string(p.n2) + "} \\pm 1$. Solve for $\\epsilon$.";
  std::ostringstream s;
  if (s1 < 0) s << "The leading coefficient is negative, so we first multiply $P(x)$ by $-1$. ";
  s << "For now, we ignore the numeric values of the coefficients and instead call them $a_1, a_2, a_3$. Our "
       "polynomial is then:\\["
    << tex(sym_poly) << ".\\] Use the substitution\\[x=y " << tex(sym.substitution)
    << ",\\]\nwhich gives the expression\\[" << tex(sym.substituted)
    << ".\\]\nDivide all terms by the coefficient remaining in front of the constant term, giving us the "
       "nondimensionalized polynomial with coefficients in terms of $a_1, a_2, a_3$: \\["
    << tex(sym.nondim_poly)
    << "\\]\nSubstituting in the known numeric values for $a_1, a_2, a_3$ (using their absolute values as we have "
       "already accounted for sign), we get: \\["
    << tex(d.result.nondim_poly)
    << "\\]\nFrom inspection of this nondimensionalized equation, we can now identify $\\epsilon$: \\[ \\epsilon="
    << tex(d.result.epsilon) << "\\implies \\boxed{\\epsilon \\approx" << tex(Expr::real(d.decimal)) << ".}\\]";
  r.solution_latex = s.str();
  return r;
}

RenderedProblem render_roots(const RootsDraft& d) {
  RenderedProblem r;
  r.question_latex = roots_question(d.poly, false);
  std::ostringstream s;
  s << "\\textbf{Solution:} " << roots_body(d.poly, d.analysis);
  s << "The roots of $P(x)$ for large positive $\\epsilon$ are\n\\[\n\\boxed{" << tex_list(d.analysis.large.roots)
    << "}\n\\]\nand the roots of $P(x)$ for small positive $\\epsilon$ are\n\\[\n\\boxed{"
    << tex_list(d.analysis.small.roots) << "}\n\\]";
  r.solution_latex = s.str();
  return r;
}

RenderedProblem render_correction(const CorrectionDraft& d) {
  RenderedProblem r;
  r.question_latex = roots_question(d.poly, true);
  std::ostringstream s;
  s << "\\textbf{Solution:} " << roots_body(d.poly, d.analysis);
  s << "We now need to calculate correction terms for these roots to give us better approximations. We consider the "
       "ansatz that the root is given by $\\overline{x} + \\delta$, where the correction term $\\delta$ is the sum of "
       "higher order terms of $\\epsilon$ that we initially neglected in our approximation $\\overline{x}$. By "
       "definition, $ \\delta < \\overline{x} .$ \nWe plug this ansatz into the polynomial and perform a series "
       "expansion in $\\delta$. We keep terms only up to $\\mathcal{O}(1)$ in $\\delta$. Then, we set the expression "
       "equal to 0 and solve for $\\delta$. \\vspace{1em} \n\n";

  const RegimeRoots* groups[2] = {&d.analysis.small, &d.analysis.large};
  std::size_t idx = 0;
  int regime_no = 0;
  for (const RegimeRoots* g : groups) {
    const std::string label = g->regime == EpsRegime::Small ? "small" : "large";
    std::size_t i = 0;
    while (i < g->roots.size()) {
      const Balance b = g->provenance[i];
      s << "\\underline{Regime " << ++regime_no << ": valid for " << label << " $\\epsilon$} \n\n";
      int root_no = 0;
      for (; i < g->roots.size() && g->provenance[i] == b; ++i, ++idx) {
        if (idx >= d.corrections.size()) throw TemplateGap("missing correction for a root");
        const Correction& c = d.corrections[idx];
        s << "\\underline{Root " << ++root_no << ": $" << tex(c.root) << "$} \n";
        s << "\\[ \\overline{{x}} + \\delta =" << tex(c.root) << "+ \\delta \\] \n";
        s << "Substitute this into $P(x)$ for $x$ and equate to $0$: \n\\[" << tex(c.substituted) << "=0. \\]\n";
        s << " We then expand this expression to get \n\\[" << tex(c.expanded) << "=0 \\] \n";
        s << " and represent it as a series of $\\mathcal{O}(1)$ in $\\delta$, discarding higher order $\\delta$ "
             "terms \n\\["
          << tex(c.linear) << "\\approx 0 .\\] \n";
        s << "We can then solve the expression for the correction $\\delta$ to $\\mathcal{O}(1)$, and get \\[ "
             "\\boxed{ \\delta \\approx"
          << tex(c.delta) << ". }\\] \n";
      }
    }
  }
  if (idx != d.corrections.size()) throw TemplateGap("correction without a root slot");
  r.solution_latex = s.str();
  return r;
}

// ---- ODEs -------------------------------------------------------------------------

std::string derivative_tex(int k) {
  if (k == 0) return "y";
  if (k == 1) return "\\frac{d}{d x} y";
  return "\\frac{d^{" + std::to_string(k) + "}}{d x^{" + std::to_string(k) + "}} y";
}

// F (y^(k))^m with F shown as a number or as its function of x.
std::string balance_rhs(const OdeSpec& spec, int term, int k, int m) {
  const RationalFn& f = spec.f[static_cast<std::size_t>(term)];
  std::string power = k == 0 ? "y^{" + std::to_string(m) + "}"
                             : "\\left(" + derivative_tex(k) + "\\right)^{" + std::to_string(m) + "}";
  const Expr fe = f.expr();
  if (fe.is_one()) return power;
  if (fe.is_exact_number() && fe.rational_value() == Rational(-1)) return "- " + power;
  const std::string ft = tex(fe);
  if (fe.kind() == ExprKind::Sum) return "\\left(" + ft + "\\right) " + power;
  return ft + " " + power;
}

std::string falling_pow_tex(int k, int m) {
  const std::string ms = std::to_string(m);
  if (k == 0) return "";
  if (k == 1) return "p^{" + ms + "}";
  return "p^{" + ms + "} \\left(p - 1\\right)^{" + ms + "}";
}

std::string coefficient_prefix(const Expr& f) {
  if (f.is_one()) return "";
  if (f.is_exact_number() && f.rational_value() == Rational(-1)) return "- ";
  const std::string ft = tex(f);
  if (f.kind() == ExprKind::Sum) return "\\left(" + ft + "\\right) ";
  return ft + " ";
}

RenderedProblem render_ode(const OdeDraft& d) {
  RenderedProblem r;
  const OdeSpec& spec = d.spec;
  const BlowupSolution& b = d.solution.blowup;
  char ics[160];
  std::snprintf(ics, sizeof ics, "y(0) &= %s \\\\\ny'(0) &= %s \\\\\ny''(0) &= %s", fixed2(spec.ics[0]).c_str(),
                fixed2(spec.ics[1]).c_str(), fixed2(spec.ics[2]).c_str());
  r.question_latex = "Consider the following third-order ordinary differential equation:  $$y''' = " +
                     tex(spec.rhs()) + "$$\n\n\\text{with initial conditions at } x = 0:\n\\begin{align*}\n" + ics +
                     "\n\\end{align*}\n\nFind analytical expressions that approximate the solution of y(x) at small "
                     "and large $x$.";

  const int k = b.k, m = b.m;
  const std::string xs = format_double(b.x_star);
  const std::string shift = b.shifted_form ? "\\left(x - " + xs + "\\right)" : "\\left(" + xs + " - x\\right)";
  const std::string form = b.shifted_form ? "\\alpha (x - x^*)^p" : "\\alpha (x^* - x)^p";
  const RationalFn& f = spec.f[static_cast<std::size_t>(b.dominant_term)];
  // d^k/dx^k of (x* - x)^p brings (-1)^k; collect it into the right-hand coefficient.
  const Expr sign_k = Expr::integer(!b.shifted_form && (k * m) % 2 == 1 ? -1 : 1);
  const Expr lhs_sign = Expr::integer(!b.shifted_form ? -1 : 1);
  const bool x_dependent = depends_on(f.expr(), "x");
  const Expr frozen =
      x_dependent ? Expr::real(round_sig(eval(f.expr(), {{"x", Complex(b.x_star)}}).real(), 4)) : f.expr();
  const Expr rhs_coef = frozen * sign_k * lhs_sign;
  const std::string ms = std::to_string(m);
  const std::string rhs_exp = k == 0 ? ms + " p" : ms + " p - " + std::to_string(m * k);
  const std::string lhs = "\\alpha p \\left(p - 2\\right) \\left(p - 1\\right)";
  const std::string rhs = coefficient_prefix(rhs_coef) + "\\alpha^{" + ms + "}" +
                          (k ? " " + falling_pow_tex(k, m) : std::string());

  std::ostringstream s;
  s << "The dominant balance in the large x regime is given by $$\\frac{d^{3}}{d x^{3}} y = "
    << balance_rhs(spec, b.dominant_term, k, m) << ".$$";
  s << " We recognize that the solution of this ODE will diverge at finite $x$ and that divergences typically follow "
       "a power law of the form \n$$ y = "
    << form << ", $$ \nwhere \\( x^* \\) is the divergence point. The divergence point can be estimated by examining "
               "the numerical solution generated by code. \n\n";
  if (x_dependent) {
    s << "Near the divergence point the coefficient of the dominant term is frozen at its value at $x = " << xs
      << "$. ";
  }
  s << "Plugging in the dominant terms we found previously yields the following equation:\n$$\n" << lhs << " " << shift
    << "^{p - 3} = " << rhs << " " << shift << "^{" << rhs_exp << "}.\n$$\n\n";
  s << "After substituting the derivatives, the equation is reorganized to collect terms with respect to \\( (x - "
       "x^*) \\). This leads to an equation where the coefficients and powers of \\( (x - x^*) \\) are equated on both "
       "sides. Simplifying the equation gives us two separate equations, one for the coefficients and another for the "
       "powers of \\( (x - x^*) \\).\nThere is now a system of equations, where the coefficients' equation is\n$$\n"
    << lhs << " = " << rhs << "\n$$\nand the powers' equation is:\n$$\np - 3 = " << rhs_exp << ".\n$$\n\n";
  s << "Solving this system of equations provides the values of \\( \\alpha \\) and \\( p \\). \nA valid solution is "
       "identified if \\( \\alpha \\) and \\( p \\) are both nonzero. \nHere, the solution for \\( \\alpha \\) and \\( "
       "p \\) is found to be:\n$$\n\\alpha = "
    << tex(b.alpha) << ", \\quad p = " << tex(Expr::rational(b.p)) << "\n$$\n\n";
  if (b.offset && b.p.sign() > 0) {
    s << "Since $p > 0$ the power law stays finite at $x^*$, so we add the constant that matches the numerical "
         "solution just before the divergence point.\n\n";
  } else if (b.offset) {
    s << "The balance only involves derivatives of $y$, so $y$ is fixed up to an additive constant; we take the "
         "constant that matches the numerical solution near the divergence point.\n\n";
  }
  s << "With these values, the analytical approximation for the solution at large $x$ (near the divergence point) is "
       "given by\n$$\ny = "
    << tex(b.expr()) << ".\n$$\n\n";
  s << "The approximate solution at small $x$ can also be solved used dominant balance, but one can take advantage of "
       "the initial conditions and form a Taylor series instead around $x=0$, which is given by $$y(x) \\approx y(0) "
       "+ y'(0)x + \\frac{y''(0)}{2!}x^2 + \\frac{y'''(0)}{3!}x^3.$$\n\n";
  s << "Plugging in the initial conditions, we get the following expression at small $x$:\n$$y(x)="
    << tex(d.solution.taylor.expr()) << "$$\n\n";
  s << "Thus, with rounding for clarity, the solution is given by \n$$\\boxed{y(x)=" << tex(d.solution.taylor.expr())
    << ", \\; y = " << tex(b.expr()) << ".}$$";
  r.solution_latex = s.str();
  return r;
}

// ---- integrals --------------------------------------------------------------------

std::string width_tex(const PolyTerm& t) {
  return "\\left( \\frac{\\epsilon}{" + std::to_string(t.coeff) + "} \\right)^{1/" + std::to_string(t.degree) + "}";
}

RenderedProblem render_poly_integral(const PolyIntegralDraft& d) {
  RenderedProblem r;
  const std::string L = number_text(d.spec.bound_a);
  const std::string poly = tex(d.spec.poly());
  r.question_latex = "Consider the integral $I(\\epsilon) = \\int_0^{" + L + "} \\frac{1}{\\epsilon + " + poly +
                     "} dx$. Develop analytical formulas that approximate $I(\\epsilon)$ for different regimes of "
                     "$\\epsilon$.";
  const auto& a = d.approx;
  std::ostringstream s;
  s << "The integral is of the form $I(\\epsilon) = \\int_0^{" << L
    << "} \\frac{1}{\\epsilon + P(x)} dx$ where $P(x)$ is a polynomial. Thus, its value can be estimated as the "
       "product between a height and a width.\n\n";
  s << "Since the integrand is maximized at $x = 0$, the height can be set to $\\frac{1}{\\epsilon}$.\n\n";
  s << "For small $\\epsilon$,\nwe define the width as the point where the integrand becomes half of its maximum "
       "height.\nThis corresponds to solving for $x$ given $P(x) = \\epsilon$.\nApplying dominant balance, "
       "considering the term in $P(x)$ with the smallest degree, the width is approximated as $ "
    << width_tex(d.spec.lowest())
    << " $.\nTherefore, the analytical approximation of the integral for small $\\epsilon$ is $I(\\epsilon) = "
    << tex(a[0].expr()) << ".$\n\n";
  s << "For an intermediate regime where $\\epsilon$ is large,\nwe also define the width based on the term with the "
       "largest degree.\nThe width is approximated as $ "
    << width_tex(d.spec.highest())
    << " $.\nTherefore, the analytical approximation of the integral for large $\\epsilon$ is $I(\\epsilon) = "
    << tex(a[1].expr()) << "$.\n\n";
  s << "If the width of the integral exceeds the range of integration, we consider one more regime for very large "
       "$\\epsilon$.\nThe width is then just the range of integration, so in this regime, the integral can be "
       "approximated as $\\frac{L}{\\epsilon}$.\nTherefore, the analytical approximation of the integral for very "
       "large $\\epsilon$ is $I(\\epsilon) = "
    << tex(a[2].expr()) << "$.\n\n";
  s << "Altogether, the solutions at small, large, and very large $\\epsilon$ are $\\boxed{" << tex(a[0].expr()) << ", "
    << tex(a[1].expr()) << ", " << tex(a[2].expr()) << ".}$";
  r.solution_latex = s.str();
  return r;
}

std::string laplace_integral_tex(const LaplaceSpec& spec) {
  const std::string sign = spec.sign > 0 ? "+" : "-";
  return "I(x) = \\int_{" + number_text(spec.a) + "}^{" + number_text(spec.b) + "} (" + tex(spec.g) + ") e^{" + sign +
         " x (" + tex(spec.f) + ")} \\, dt";
}

RenderedProblem render_laplace(const LaplaceDraft& d) {
  RenderedProblem r;
  const LaplaceSpec& spec = d.spec;
  const std::string sign = spec.sign > 0 ? "+" : "-";
  const std::string extremum = spec.sign > 0 ? "maximum" : "minimum";
  const std::string a = number_text(spec.a), b = number_text(spec.b);
  const std::string t0 = fixed2(d.critical.t0);
  const std::string offset = d.critical.t0 < 0 ? "+" + fixed2(-d.critical.t0) : "-" + t0;
  const std::string shift = "t" + offset;
  r.question_latex = "Consider the integral \\par \\begin{equation} " + laplace_integral_tex(spec) +
                     " \\end{equation} \\par Develop an analytical formula for $I(x)$ that is accurate as $x \\to "
                     "\\infty$.";

  std::vector<std::string> crit;
  for (double c : d.critical.critical) crit.push_back(fixed2(c));
  const Expr df = differentiate(spec.f, "t");

  std::ostringstream s;
  s << "The integral is of the form \\begin{equation} I(x) = \\int_{a}^{b} g(t) e^{" << sign
    << " x f(t)} \\, dt \\end{equation} \\par where $a=" << a << "$, $b=" << b << "$, $g(t) = " << tex(spec.g)
    << "$, and $f(t) = " << tex(spec.f)
    << "$. This means we can use Laplace's method to develop an analytical approximation in the limit that $x \\to "
       "\\infty$.  In this limit, the integral will be dominated by the integrand near the "
    << extremum << " of $f(t)$ within the bounds $[" << a << ", " << b
    << "]$. So, to simplify the integral, we will expand the integrand around this " << extremum
    << ". In this case, we can find the " << extremum << " of $f(t) = " << tex(spec.f)
    << "$ on the interval analytically. We begin by looking for critical point(s) $t_{crit}$ of $f(t)$ by solving "
       "$f'(t) = "
    << tex(df) << " = 0$ for $t$. ";
  if (crit.empty()) {
    s << "This gives us no critical points inside the interval. ";
  } else {
    s << "This gives us that $t_{crit} = [" << join(crit, ", ") << "]$. ";
  }
  s << "To find the " << extremum << " on this interval, we evaluate $f(t)$ at the critical point(s) $t_{crit}$ and "
    << "the bounds $" << a << "$ and $" << b << "$. We take the $t$ that gives the "
    << (spec.sign > 0 ? "largest" : "smallest") << " value. Here, this " << extremum << " $t_0 = [" << t0 << "]$. ";

  if (d.critical.kind == LaplaceKind::Interior) {
    s << "Since the integral is dominated by the value of the integrand near " << t0
      << ", we Taylor expand the integrand around this point. \\begin{multline} I(x) =  \\int_{a}^{b} (g(" << t0
      << ") + (" << shift << ")g'(" << t0 << ")+...) \\\\\n * e^{" << sign << " x (f(" << t0 << ") + (" << shift
      << ") f'(" << t0 << ") + \\frac{(" << shift << ")^2}{2} f''(" << t0 << ") +...)} dt\\end{multline}But $f'("
      << t0 << ") = 0$ by definition, so we can remove this term from the exponent. We can then approximate "
      << "\\begin{equation} I(x) \\approx \\int_{a}^{b} g(" << t0 << ") e^{" << sign << " x (f(" << t0 << ") + \\frac{("
      << shift << ")^2}{2} f''(" << t0 << "))} \\, dt, \\end{equation} which equals \\begin{equation} g(" << t0
      << ") e^{" << sign << " x f(" << t0 << ")} \\int_{a}^{b} e^{" << sign << " x (\\frac{(" << shift
      << ")^2}{2} f''(" << t0 << "))} \\, dt \\end{equation} We perform the change of variables $u = \\sqrt{x "
      << "\\frac{|f''(" << t0 << ")|}{2}}(" << shift << ")$, rewriting the integral as \\begin{equation} g(" << t0
      << ") e^{" << sign << " x f(" << t0 << ")} \\int_{\\sqrt{x \\frac{|f''(" << t0 << ")|}{2}} (a" << offset
      << ")}^{\\sqrt{x \\frac{|f''(" << t0 << ")|}{2}} (b" << offset << ")} \\sqrt{\\frac{2}{x |f''(" << t0
      << ")|}} e^{-u^2} \\, du \\end{equation} \\par Since $x \\to \\infty$, we approximate this as "
      << "\\begin{equation} g(" << t0 << ") e^{" << sign << " x f(" << t0 << ")} \\sqrt{\\frac{2}{x |f''(" << t0
      << ")|} } \\int_{-\\infty}^{\\infty} e^{-u^2} \\, du \\end{equation} ";
  } else {
    s << "Since the integral is dominated by the value of the integrand near the endpoint " << t0
      << ", where $f'(" << t0 << ") \\neq 0$, we Taylor expand the integrand around this point to first order. "
      << "\\begin{equation} I(x) \\approx \\int_{a}^{b} g(" << t0 << ") e^{" << sign << " x (f(" << t0 << ") + ("
      << shift << ") f'(" << t0 << "))} \\, dt \\end{equation} The exponential decays away from the endpoint on a "
      << "scale $1/(x |f'(" << t0 << ")|)$, so the other bound can be sent to infinity, giving \\begin{equation} I(x) "
      << "\\approx \\frac{g(" << t0 << ") e^{" << sign << " x f(" << t0 << ")}}{x |f'(" << t0
      << ")|} \\end{equation} ";
  }
  s << "Solving the integral and evaluating, we find that \\par \\begin{equation} \\boxed{I(x) \\approx "
    << tex(d.approx.expr()) << "} \\end{equation}";
  r.solution_latex = s.str();
  return r;
}

}  // namespace

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string out = buf;
  if (out == "-0.00") out = "0.00";
  return out;
}

std::vector<std::string> boxed_spans(const std::string& latex) {
  std::vector<std::string> out;
  const std::string tag = "\\boxed{";
  std::size_t pos = 0;
  while ((pos = latex.find(tag, pos)) != std::string::npos) {
    std::size_t i = pos + tag.size();
    int depth = 1;
    const std::size_t start = i;
    for (; i < latex.size() && depth > 0; ++i) {
      if (latex[i] == '\\' && i + 1 < latex.size()) {
        ++i;
        continue;
      }
      if (latex[i] == '{') ++depth;
      if (latex[i] == '}') --depth;
    }
    if (depth != 0) break;
    out.push_back(latex.substr(start, i - 1 - start));
    pos = i;
  }
  return out;
}

std::vector<BoxedAnswer> boxed_answers(const Draft& d) {
  std::vector<BoxedAnswer> out;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NondimSymbolicDraft>) {
          out.push_back({"epsilon", v.result.epsilon});
        } else if constexpr (std::is_same_v<T, NondimNumericDraft>) {
          out.push_back({"epsilon", Expr::real(v.decimal)});
        } else if constexpr (std::is_same_v<T, RootsDraft>) {
          for (const Expr& r : v.analysis.small.roots) out.push_back({"small_eps", r});
          for (const Expr& r : v.analysis.large.roots) out.push_back({"large_eps", r});
        } else if constexpr (std::is_same_v<T, CorrectionDraft>) {
          for (const Correction& c : v.corrections) out.push_back({regime_tag(c.regime), c.delta});
        } else if constexpr (std::is_same_v<T, OdeDraft>) {
          out.push_back({"small_x", v.solution.taylor.expr()});
          out.push_back({"large_x", v.solution.blowup.expr()});
        } else if constexpr (std::is_same_v<T, PolyIntegralDraft>) {
          for (const RegimeApprox& a : v.approx) out.push_back({regime_tag(a.regime), a.expr()});
        } else if constexpr (std::is_same_v<T, LaplaceDraft>) {
          out.push_back({"large_x", v.approx.expr()});
        }
      },
      d);
  return out;
}

RenderedProblem render_record(const Draft& d) {
  RenderedProblem r = std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NondimSymbolicDraft>) return render_nondim_symbolic(v);
        else if constexpr (std::is_same_v<T, NondimNumericDraft>) return render_nondim_numeric(v);
        else if constexpr (std::is_same_v<T, RootsDraft>) return render_roots(v);
        else if constexpr (std::is_same_v<T, CorrectionDraft>) return render_correction(v);
        else if constexpr (std::is_same_v<T, OdeDraft>) return render_ode(v);
        else if constexpr (std::is_same_v<T, PolyIntegralDraft>) return render_poly_integral(v);
        else return render_laplace(v);
      },
      d);
  r.answers = boxed_answers(d);

  const auto spans = boxed_spans(r.solution_latex);
  for (const BoxedAnswer& a : r.answers) {
    const std::string text = tex(a.expr);
    bool found = false;
    for (const std::string& span : spans) found = found || span.find(text) != std::string::npos;
    if (!found) throw TemplateGap("answer for regime '" + a.regime + "' has no boxed slot");
  }
  return r;
}

}  // namespace asymgen
