#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "asymgen/errors.hpp"

namespace asymgen {

using Complex = std::complex<double>;

// ---- quadrature -----------------------------------------------------------------

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
  int subdivisions = 0;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature with global bisection of the
/// worst interval. Throws NoConvergence past `max_subdivisions`.
QuadResult adaptive_quad(const std::function<double(double)>& f, double a, double b, double rtol = 1e-8,
                         double atol = 0.0, int max_subdivisions = 10000);

/// Integral over [a, b] split at the interior `breaks`.
QuadResult adaptive_quad_split(const std::function<double(double)>& f, double a, double b,
                               const std::vector<double>& breaks, double rtol = 1e-8);

// ---- ODEs ------------------------------------------------------------------------

/// Right-hand side y''' = F(x, y, y', y'').
using ThirdOrderRhs = std::function<double(double x, double y, double y1, double y2)>;
using OdeState = std::array<double, 3>;

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double blow_threshold = 1e6;   // on |y|
  double deriv_threshold = 1e12;  // on |y'| and |y''|
  double locate_tol = 1e-3;
  int max_steps = 2'000'000;
};

struct OdeTrace {
  std::vector<double> xs;
  std::vector<OdeState> ys;
  std::vector<OdeState> dys;  // state derivatives, for interpolation
  std::optional<double> blowup_x;
  bool derivative_blowup = false;  // a derivative diverged while y stayed bounded

  /// Cubic Hermite interpolation of the state inside the trace.
  OdeState at(double x) const;
};

/// Dormand-Prince 5(4) integration from x = 0 to x_max, stopping at blow-up.
/// Throws StiffFailure if the step size underflows with no blow-up signature
/// and NoConvergence when `max_steps` runs out.
OdeTrace integrate_ode(const ThirdOrderRhs& rhs, const OdeState& y0, double x_max, const OdeOptions& opts = {});

// ---- polynomials -------------------------------------------------------------------

/// All complex roots of sum_k coeffs[k] x^k (ascending order), via the
/// companion-matrix eigenvalues polished by Newton steps.
std::vector<Complex> numeric_roots(const std::vector<Complex>& coeffs);

/// Greedy nearest pairing: repeatedly takes the globally closest unused
/// (analytic, numeric) pair. Returns, for each analytic value, the index of
/// its partner or -1 when the relative distance exceeds `rel_tol`.
std::vector<int> greedy_match(const std::vector<Complex>& analytic, const std::vector<Complex>& numeric,
                              double rel_tol);

// ---- validation reports ------------------------------------------------------------

struct ValidationEntry {
  std::string regime;
  double probe = 0.0;
  Complex analytic;
  Complex numeric;
  double rel_error = 0.0;
};

struct ValidationReport {
  static constexpr double kGate = 0.10;
  std::vector<ValidationEntry> entries;
  bool pass = false;

  void add(std::string regime, double probe, Complex analytic, Complex numeric);
  /// Recomputes `pass`: true iff non-empty and every rel_error < kGate.
  void finalize();
  double max_error() const;
};

double relative_error(Complex analytic, Complex numeric);

}  // namespace asymgen
