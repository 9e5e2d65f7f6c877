#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "asymgen/expr.hpp"

namespace asymgen {

/// Three-term polynomial c1 x^n1 + c2 x^n2 + c3 with signed integer
/// coefficients (the sign of each c_i is the s_i of the canonical form).
struct ThreeTermPoly {
  std::int64_t c1 = 1, c2 = 1, c3 = 1;
  int n1 = 2, n2 = 1;

  Expr expr(std::string_view var = "x") const;
};

/// Canonical shape epsilon x^n1 + s2 x^n2 + s3 with s2, s3 in {+1, -1}.
struct NondimPoly {
  int n1 = 2, n2 = 1;
  int s2 = 1, s3 = 1;

  /// The polynomial with epsilon as a Param.
  Expr expr(std::string_view var = "x") const;
  /// P evaluated at complex x and numeric epsilon.
  Complex eval(Complex x, double eps) const;
  Complex derivative(Complex x, double eps) const;
  /// Ascending coefficients for numeric root finding.
  std::vector<Complex> coefficients(double eps) const;
};

struct NondimResult {
  Expr substitution;        // x = y * scale: the scale factor
  Expr substituted;         // polynomial in y before normalization
  Expr nondim_poly;         // polynomial in y after normalization
  Expr epsilon;             // closed form
  std::optional<double> epsilon_value;
  std::optional<NondimPoly> shape;
};

/// Symbolic case: a1 x^n1 + s2 a2 x^n2 + s3 a3 with positive Params a1..a3;
/// the result is eps y^n1 + s2 y^n2 + s3.
NondimResult nondim_symbolic(int n1, int n2, int s2 = 1, int s3 = 1);

/// Numeric case. Magnitudes enter the substitution; signs are folded so the
/// result reads epsilon y^n1 + (s1 s2) y^n2 + (s1 s3).
/// Throws DegenerateInput when a coefficient is zero.
NondimResult nondim_numeric(const ThreeTermPoly& p);

// ---- dominant balance --------------------------------------------------------

enum class Term { A, B, C };
enum class EpsRegime { Small, Large };

std::string regime_tag(EpsRegime r);  // "small_eps" / "large_eps"
char term_letter(Term t);

struct Balance {
  Term first, second;  // kept
  Term neglected;

  std::string name() const;  // e.g. "A+B"
  friend bool operator==(const Balance&, const Balance&) = default;
};

/// The three two-term balances in the order A+B, B+C, A+C.
std::array<Balance, 3> all_balances();

struct PolyProbes {
  double small_eps = 1e-3;
  double large_eps = 1e3;
  double ratio_threshold = 0.1;
};

struct BalanceRoots {
  Balance balance;
  Expr reduced;              // the two-term equation (= 0)
  std::vector<Expr> roots;   // nonzero roots of the reduced equation
  bool valid_small = false;
  bool valid_large = false;
};

struct RegimeRoots {
  EpsRegime regime = EpsRegime::Small;
  std::vector<Expr> roots;
  std::vector<Balance> provenance;  // balance of each root
};

struct RootAnalysis {
  std::vector<BalanceRoots> balances;
  RegimeRoots small;
  RegimeRoots large;
};

/// Nonzero roots of the two-term equation kept by `b`.
std::vector<Expr> solve_balance(const NondimPoly& p, const Balance& b);

/// Self-consistency of a balance's roots at the probe epsilon of each regime:
/// max |neglected| <= ratio * min |kept| for every root.
std::pair<bool, bool> check_consistency(const NondimPoly& p, const Balance& b, const std::vector<Expr>& roots,
                                        const PolyProbes& probes = {});

/// All balances, their validity, and the per-regime root sets.
/// Throws InconsistentCover unless each regime holds exactly n1 distinct roots.
RootAnalysis balance_roots(const NondimPoly& p, const PolyProbes& probes = {});

// ---- corrections ----------------------------------------------------------------

struct Correction {
  Expr root;
  Expr delta;
  EpsRegime regime = EpsRegime::Small;
  Expr substituted;  // P(root + delta)
  Expr expanded;     // binomially expanded in delta
  Expr linear;       // truncated at first order in delta
};

/// delta = -P(root) / P'(root). Throws SingularCorrection when P'(root) is 0.
Correction correction_term(const NondimPoly& p, const Expr& root, EpsRegime regime);

/// Whether |P(root + delta)| < |P(root)| at `eps`.
bool correction_improves(const NondimPoly& p, const Correction& c, double eps);

/// Root values at numeric epsilon.
std::vector<Complex> eval_roots(const std::vector<Expr>& roots, double eps);

}  // namespace asymgen
