#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asymgen/errors.hpp"
#include "asymgen/rational.hpp"

namespace asymgen {

enum class ExprKind { Int, Rat, Float, Imag, Pi, Param, Var, Sum, Prod, Pow, Func };
enum class FuncKind { Sin, Cos, Atan, Exp };

using Complex = std::complex<double>;
using Bindings = std::map<std::string, Complex, std::less<>>;

/// Immutable symbolic expression with value semantics.
///
/// Every Expr is canonical: the factory functions below flatten nested sums
/// and products, fold numeric constants, collect like terms, merge powers of
/// a common base and sort children into a fixed order. Two expressions built
/// from the same value by different routes (up to commutativity) therefore
/// compare structurally equal.
///
/// Params (`epsilon`, `a1`, `a2`, ...) are positive reals, which licenses
/// (p^r)^s = p^(rs) and (p q)^r = p^r q^r for them. Vars are unrestricted
/// complex symbols. Fractional powers use the principal branch.
class Expr {
 public:
  /// The integer zero.
  Expr();

  static Expr integer(std::int64_t v);
  static Expr rational(const Rational& q);
  static Expr real(double v);
  static Expr imag_unit();
  static Expr pi();
  static Expr param(std::string name);
  static Expr var(std::string name);
  /// Param for `epsilon` and `a<digits>`, Pi for `pi`, Var otherwise.
  static Expr symbol(std::string_view name);

  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(const Expr& base, const Rational& exponent);
  static Expr func(FuncKind kind, const Expr& arg);

  ExprKind kind() const noexcept;
  bool is_number() const noexcept;  // Int, Rat or Float
  bool is_exact_number() const noexcept;  // Int or Rat
  bool is_zero() const noexcept;
  bool is_one() const noexcept;

  /// Valid for Int and Rat.
  const Rational& rational_value() const;
  /// Valid for Float (and converts Int/Rat).
  double float_value() const;
  /// Valid for Param and Var.
  const std::string& name() const;
  /// Valid for Pow.
  const Expr& base() const;
  const Rational& exponent() const;
  /// Valid for Func.
  FuncKind func_kind() const;
  const Expr& arg() const;
  /// Children of Sum / Prod; base of Pow; argument of Func.
  std::span<const Expr> children() const;

  /// Total structural order; 0 iff structurally equal.
  friend int compare(const Expr& a, const Expr& b);
  friend bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
  friend bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;

  friend struct ExprBuild;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Rational& exponent);
Expr sqrt(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr atan(const Expr& e);
Expr exp(const Expr& e);

// ---- core operations -------------------------------------------------------

enum class Dialect { Infix, LatexLite };

/// Parses text into a canonical Expr.
/// Throws SyntaxError (with byte offset) or UnknownSymbol.
Expr parse(std::string_view src, Dialect dialect = Dialect::LatexLite);

/// Exact symbolic derivative with respect to `var` (Param or Var name).
Expr differentiate(const Expr& e, std::string_view var);

/// How fractional powers of negative reals are taken.
enum class Branch {
  Principal,    // complex principal branch
  RealOddRoot,  // (-8)^(1/3) = -2 when the exponent's denominator is odd
};

/// Complex evaluation. Throws DomainError (0^negative) or UnboundSymbol.
Complex eval(const Expr& e, const Bindings& b, Branch branch = Branch::Principal);

using RealFn = std::function<double(double)>;
/// Compiles `e` into a fast real function of `var`; other symbols must be in
/// `consts`. Fractional powers of negative values yield NaN.
RealFn compile_real(const Expr& e, std::string_view var, const std::map<std::string, double, std::less<>>& consts = {});

/// LaTeX text that re-parses (latex-lite) to a structurally equal Expr.
std::string render_latex(const Expr& e);
/// Infix text that re-parses (infix) to a structurally equal Expr.
/// This is the canonical text stored in dataset records.
std::string render_infix(const Expr& e);

/// Rebuilds the tree bottom-up through the canonicalizing constructors.
Expr simplify_basic(const Expr& e);

// ---- utilities ---------------------------------------------------------------

/// Replaces every Param/Var called `name` by `with`.
Expr substitute(const Expr& e, std::string_view name, const Expr& with);
/// Names of all Params and Vars.
std::set<std::string> free_symbols(const Expr& e);
bool depends_on(const Expr& e, std::string_view name);
/// Whether the expression is known to be a positive real (numbers > 0,
/// Params, pi, and products/powers of those).
bool is_positive(const Expr& e);
/// Degree of a polynomial term in `var`: exponent of var in a monomial; 0 for
/// terms free of it. Non-monomial dependence yields nullopt.
std::optional<Rational> monomial_degree(const Expr& term, std::string_view var);
/// Coefficient of var^degree in a sum of monomials in var.
Expr coefficient(const Expr& poly, std::string_view var, const Rational& degree);
/// Rounds every Float to `sig` significant digits.
Expr round_floats(const Expr& e, int sig);
/// Rounds a double to `sig` significant digits.
double round_sig(double v, int sig);
/// Shortest round-trip fixed-notation text for a double.
std::string format_double(double v);

}  // namespace asymgen
