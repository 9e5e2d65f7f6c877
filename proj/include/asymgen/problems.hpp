#pragma once

#include <array>
#include <variant>
#include <vector>

#include "asymgen/intasym.hpp"
#include "asymgen/odeasym.hpp"
#include "asymgen/polyasym.hpp"
#include "asymgen/records.hpp"
#include "asymgen/rng.hpp"

namespace asymgen {

// Solver outputs for one problem, before rendering. Every draft is rebuilt
// deterministically from its params, which is how stored records are
// re-validated.

struct NondimSymbolicDraft {
  int n1 = 2, n2 = 1, s2 = 1, s3 = 1;
  NondimResult result;
};

struct NondimNumericDraft {
  ThreeTermPoly poly;
  NondimResult result;
  double decimal = 0.0;  // the boxed value
};

struct RootsDraft {
  NondimPoly poly;
  PolyProbes probes;
  RootAnalysis analysis;
};

struct CorrectionDraft {
  NondimPoly poly;
  PolyProbes probes;
  RootAnalysis analysis;
  std::vector<Correction> corrections;  // small-regime roots first, then large
};

struct OdeDraft {
  OdeSpec spec;
  OdeSolution solution;
};

struct PolyIntegralDraft {
  PolyIntegralSpec spec;
  std::array<RegimeApprox, 3> approx;
};

struct LaplaceDraft {
  LaplaceSpec spec;
  CriticalPoint critical;
  LaplaceApprox approx;
};

using Draft = std::variant<NondimSymbolicDraft, NondimNumericDraft, RootsDraft, CorrectionDraft, OdeDraft,
                           PolyIntegralDraft, LaplaceDraft>;

PType draft_type(const Draft& d);

/// Knobs shared by the per-type parameter samplers.
struct ProblemSettings {
  PolyProbes poly_probes;
  OdeGenConfig ode;
  PolyIntGenConfig poly_integral;
  LaplaceGenConfig laplace;
};

/// Draws raw parameters for one candidate problem.
Json random_params(PType t, Rng& rng, const ProblemSettings& settings = {});

/// Runs the solver on `params`. Solver-stage rejections propagate as the
/// library's Error subclasses.
Draft solve_params(PType t, const Json& params);

/// The boxed decimal for a numeric epsilon: two decimal places unless that
/// rounding moves the value by more than 10%, then two significant digits.
double epsilon_decimal(double eps);

/// Runs the numeric oracle against the draft's analytic answers.
ValidationReport gate(const Draft& d);

}  // namespace asymgen
