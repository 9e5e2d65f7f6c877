#pragma once

#include <array>
#include <optional>
#include <string>

#include "asymgen/expr.hpp"
#include "asymgen/numoracle.hpp"
#include "asymgen/rng.hpp"

namespace asymgen {

/// num / den(x); a zero numerator means the term is absent.
struct RationalFn {
  std::int64_t num = 0;
  Expr den = Expr::integer(1);

  Expr expr() const;
  bool is_zero() const { return num == 0; }
};

/// y''' = f1 (y'')^a + f2 (y')^b + f3 y^c + f4.
struct OdeSpec {
  std::array<RationalFn, 4> f;
  std::array<int, 3> exps{1, 1, 1};  // a, b, c
  std::array<int, 3> ics{0, 0, 0};   // y(0), y'(0), y''(0)

  /// Right-hand side with Vars y, y', y'' and x.
  Expr rhs() const;
  /// Fast numeric right-hand side.
  ThirdOrderRhs compile() const;
};

struct OdeGenConfig {
  std::array<int, 2> exponent_range{1, 4};
  int max_den_degree = 4;
  int coef_bound = 26;
  int num_bound = 3;
  double x_max = 200.0;
};

/// Draws a spec satisfying the structural invariants: ICs in [0, 3], integer
/// rational-function coefficients with denominators nonvanishing on
/// [0, x_max], at least one nonlinear term, and no exponent/term pairing whose
/// balance is known to be degenerate. Throws GenerationExhausted.
OdeSpec generate_ode(Rng& rng, const OdeGenConfig& cfg = {});

struct TaylorSolution {
  std::array<Expr, 4> c;  // coefficients of 1, x, x^2, x^3

  Expr expr() const;
};

/// Throws SingularAtOrigin if some f_i has a pole at 0.
TaylorSolution small_x_taylor(const OdeSpec& spec);

struct Dominance {
  int term = -1;                  // 0: f1 (y'')^a, 1: f2 (y')^b, 2: f3 y^c, 3: f4
  std::array<double, 4> average{};  // mean magnitude over the final window
};

/// Picks the right-hand-side term with the largest mean magnitude over the
/// last 5% of the trace. Throws NoDivergence when the trace did not blow up
/// and AmbiguousDominance when the runner-up is within a factor 10 or the
/// winner is the forcing term f4.
Dominance dominant_pair_select(const OdeSpec& spec, const OdeTrace& trace);

/// Divergence point extrapolated from the final trace state.
double refine_blowup(const OdeSpec& spec, const OdeTrace& trace);

struct BlowupSolution {
  double x_star = 0.0;
  Rational p;
  int k = 0;  // derivative order of the dominant term
  int m = 0;  // its exponent
  double beta = 0.0;     // y = beta (x* - x)^p
  Expr beta_expr;        // exact when the dominant coefficient is constant
  Expr alpha;            // presentation coefficient
  bool shifted_form = true;  // alpha (x - x*)^p rather than beta (x* - x)^p
  std::optional<double> offset;
  int dominant_term = -1;

  /// y(x) in presentation form (offset included).
  Expr expr() const;
  /// Real value of the approximation at x < x*.
  double value(double x) const;
};

/// Solves y''' = F (y^(k))^m with y = beta (x* - x)^p:
///   p - 3 = m (p - k),  -p(p-1)(p-2) = F (-1)^(km) beta^(m-1) fall_k(p)^m.
/// `sign_hint` picks between the two real roots when m - 1 is even.
/// Throws NoNonzeroSolution when p or alpha would be 0 or no real alpha exists.
BlowupSolution power_law_solve(int k, int m, const Expr& F, double x_star, int sign_hint = 1);

/// Falling factorial p (p-1) ... (p-k+1).
Rational falling(const Rational& p, int k);

struct OdeSolution {
  TaylorSolution taylor;
  OdeTrace trace;
  Dominance dominance;
  BlowupSolution blowup;
};

struct OdeProbes {
  std::array<double, 3> blowup_offsets{0.2, 0.15, 0.1};
  std::array<double, 5> taylor_points{0.02, 0.04, 0.06, 0.08, 0.1};
};

/// Full pipeline: Taylor series, numeric trace, dominant balance, power law,
/// and the additive offset: always when p > 0, and for p < 0 when the
/// balance involves only derivatives of y and the constant is not negligible.
OdeSolution solve_ode(const OdeSpec& spec, double x_max = 200.0);

/// Gate report: Taylor at small x and the power law at x* minus the offsets
/// (clipped to the reliable part of the trace).
ValidationReport validate_ode(const OdeSpec& spec, const OdeSolution& sol, const OdeProbes& probes = {});

}  // namespace asymgen
