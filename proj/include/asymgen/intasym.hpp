#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "asymgen/expr.hpp"
#include "asymgen/numoracle.hpp"
#include "asymgen/rng.hpp"

namespace asymgen {

// ---- polynomial integrals: I(eps) = int_0^L dx / (eps + P(x)) ----------------------

struct PolyTerm {
  int coeff = 1;
  int degree = 1;
  friend bool operator==(const PolyTerm&, const PolyTerm&) = default;
};

struct PolyIntegralSpec {
  std::vector<PolyTerm> terms;  // sorted by ascending degree
  double bound_a = 1.0;

  Expr poly(std::string_view var = "x") const;
  double eval(double x) const;
  const PolyTerm& lowest() const { return terms.front(); }
  const PolyTerm& highest() const { return terms.back(); }
};

struct PolyIntGenConfig {
  int max_terms = 10;
  int min_terms = 2;
  std::array<int, 2> degree_range{5, 20};
  std::array<int, 2> coeff_range{1, 10};
  std::array<int, 2> bound_range{2, 100};
};

PolyIntegralSpec generate_poly_integral(Rng& rng, const PolyIntGenConfig& cfg = {});

enum class IntRegime { Small, Intermediate, VeryLarge };

std::string regime_tag(IntRegime r);  // "small" / "intermediate" / "very_large"

/// I ~ coefficient * eps^eps_exponent.
struct RegimeApprox {
  IntRegime regime = IntRegime::Small;
  double coefficient = 0.0;  // rounded to 4 significant digits
  Rational eps_exponent;
  double width_scale = 0.0;  // unrounded c^(-1/d), or L

  Expr expr() const;
  double value(double eps) const;
};

/// Height 1/eps times a width: (eps/c)^(1/d) from the lowest-degree term for
/// small eps, from the highest-degree term for intermediate eps, and L itself
/// when the width exceeds the range.
std::array<RegimeApprox, 3> approx_poly_integral(const PolyIntegralSpec& spec);

/// Probe eps per regime: 1e-6, the geometric mean of the two crossover eps
/// values, and 10 c_max L^d_max.
std::array<double, 3> poly_integral_probes(const PolyIntegralSpec& spec);

/// Quadrature of the exact integrand, split at the width of the spike.
double poly_integral_numeric(const PolyIntegralSpec& spec, double eps);

ValidationReport validate_poly_integral(const PolyIntegralSpec& spec, const std::array<RegimeApprox, 3>& approx);

// ---- Laplace integrals: I(x) = int_a^b g(t) e^(sign x f(t)) dt ----------------------

struct LaplaceSpec {
  Expr g;
  Expr f;
  int sign = 1;
  double a = 0.0;
  double b = 1.0;
};

struct LaplaceGenConfig {
  int max_g_terms = 3;
  int max_f_terms = 8;
  // Coefficients are multiples of 0.1 in [-bound, bound].
  double g_coef_bound = 3.0;
  double f_coef_bound = 5.0;
};

/// f and g are random combinations of t, ..., t^5, sin t, cos t, atan t (plus
/// a constant) with one-decimal coefficients; bounds on the grid {-1, -0.9, ..., 1}.
LaplaceSpec generate_laplace(Rng& rng, const LaplaceGenConfig& cfg = {});

enum class LaplaceKind { Interior, Endpoint };

std::string kind_tag(LaplaceKind k);

struct CriticalPoint {
  double t0 = 0.0;
  LaplaceKind kind = LaplaceKind::Endpoint;
  std::vector<double> critical;  // interior roots of f', ascending
};

/// Maximizer of sign * f on [a, b]. Throws DegenerateMax.
CriticalPoint laplace_critical_point(const LaplaceSpec& spec);

/// I ~ coefficient * x^x_power * e^(rate x), with the interior prefactor
/// written as coefficient' * sqrt(pi / x).
struct LaplaceApprox {
  LaplaceKind kind = LaplaceKind::Interior;
  double t0 = 0.0;
  double coefficient = 0.0;  // g(t0) sqrt(2/|f''|) or g(t0)/|f'|, 4 significant digits
  double rate = 0.0;         // sign * f(t0): 4 significant digits below 1, else 3 decimals
  Rational x_power;

  Expr expr() const;
  /// I(x) e^(-rate x), the quantity compared against quadrature.
  double scaled_value(double x) const;
};

/// Throws ZeroAmplitude if g(t0) = 0 and DegenerateMax if the relevant
/// derivative vanishes.
LaplaceApprox laplace_formula(const LaplaceSpec& spec, const CriticalPoint& cp);

/// int_a^b g(t) e^(sign x (f(t) - f(t0))) dt.
double laplace_shifted_numeric(const LaplaceSpec& spec, double t0, double x);

struct LaplaceProbes {
  std::array<double, 2> xs{20.0, 50.0};
};

ValidationReport validate_laplace(const LaplaceSpec& spec, const LaplaceApprox& approx,
                                  const LaplaceProbes& probes = {});

}  // namespace asymgen
