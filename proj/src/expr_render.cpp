#include <algorithm>
#include <string>
#include <vector>

#include "asymgen/expr.hpp"

namespace asymgen {
namespace {

const char* const kGreek[] = {"alpha", "beta",  "gamma", "delta", "eta",   "theta", "kappa", "lambda",
                              "mu",    "nu",    "xi",    "rho",   "sigma", "tau",   "phi",   "chi",
                              "psi",   "omega", "zeta",  "iota",  "Gamma", "Delta", "Lambda", "Omega"};

bool is_greek(const std::string& s) {
  return std::find(std::begin(kGreek), std::end(kGreek), s) != std::end(kGreek);
}

std::string float_text(double v) {
  std::string s = format_double(v);
  if (s.find('.') == std::string::npos && s.find_first_of("ein") == std::string::npos) s += ".0";
  return s;
}

bool starts_negative(const std::string& s) { return !s.empty() && s[0] == '-'; }

std::string strip_sign(const std::string& s) {
  std::size_t i = 1;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

bool is_minus_one(const Expr& e) {
  return e.kind() == ExprKind::Int && e.rational_value() == Rational(-1);
}

struct Split {
  Expr coef = Expr::integer(1);
  std::vector<Expr> num;
  std::vector<Expr> den;  // stored with positive exponents
};

// Splits a product into coefficient, numerator factors and denominator factors.
template <typename MovesDown>
Split split_product(const Expr& e, const MovesDown& moves_down) {
  Split out;
  std::vector<Expr> factors;
  if (e.kind() == ExprKind::Prod) {
    factors.assign(e.children().begin(), e.children().end());
  } else {
    factors.push_back(e);
  }
  for (const Expr& f : factors) {
    if (f.is_number()) {
      out.coef = f;
    } else if (f.kind() == ExprKind::Pow && f.exponent().sign() < 0 && !is_minus_one(f.base()) && moves_down(f.base())) {
      out.den.push_back(Expr::power(f.base(), -f.exponent()));
    } else {
      out.num.push_back(f);
    }
  }
  return out;
}

// ---- infix ------------------------------------------------------------------------

std::string infix(const Expr& e);

bool infix_atomic(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Int: return e.rational_value().sign() >= 0;
    case ExprKind::Float: return e.float_value() >= 0;
    case ExprKind::Imag:
    case ExprKind::Pi:
    case ExprKind::Param:
    case ExprKind::Var:
    case ExprKind::Func: return true;
    default: return false;
  }
}

std::string infix_exponent(const Rational& r) {
  if (r.is_integer() && r.sign() > 0) return r.str();
  return "(" + r.str() + ")";
}

std::string infix_pow(const Expr& e) {
  const Expr& b = e.base();
  std::string base = infix_atomic(b) ? infix(b) : "(" + infix(b) + ")";
  return base + "^" + infix_exponent(e.exponent());
}

std::string infix_factor(const Expr& f) {
  if (f.kind() == ExprKind::Sum) return "(" + infix(f) + ")";
  if (f.kind() == ExprKind::Pow) return infix_pow(f);
  if (f.is_number() && !infix_atomic(f)) return "(" + infix(f) + ")";
  return infix(f);
}

std::string infix_product(const Expr& e) {
  Split s = split_product(e, [](const Expr&) { return true; });
  std::string sign;
  std::vector<std::string> num;
  std::vector<std::string> den;
  if (s.coef.is_exact_number()) {
    Rational q = s.coef.rational_value();
    if (q.sign() < 0) {
      sign = "-";
      q = -q;
    }
    if (q.num() != 1 || s.num.empty()) num.push_back(std::to_string(q.num()));
    if (q.den() != 1) den.push_back(std::to_string(q.den()));
  } else {
    double v = s.coef.float_value();
    if (v < 0) {
      sign = "-";
      v = -v;
    }
    num.push_back(float_text(v));
  }
  for (const Expr& f : s.num) num.push_back(infix_factor(f));
  for (const Expr& f : s.den) den.push_back(infix_factor(f));

  auto join = [](const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "*" : "") + parts[i];
    return out;
  };
  std::string out = sign + join(num);
  if (!den.empty()) out += "/" + (den.size() == 1 ? den.front() : "(" + join(den) + ")");
  return out;
}

std::string infix(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Int: return e.rational_value().str();
    case ExprKind::Rat: return e.rational_value().str();
    case ExprKind::Float: return float_text(e.float_value());
    case ExprKind::Imag: return "i";
    case ExprKind::Pi: return "pi";
    case ExprKind::Param:
    case ExprKind::Var: return e.name();
    case ExprKind::Sum: {
      std::string out;
      bool first = true;
      for (const Expr& t : e.children()) {
        std::string s = infix(t);
        if (first) {
          out = s;
        } else if (starts_negative(s)) {
          out += " - " + strip_sign(s);
        } else {
          out += " + " + s;
        }
        first = false;
      }
      return out;
    }
    case ExprKind::Prod: return infix_product(e);
    case ExprKind::Pow:
      if (e.exponent().sign() < 0 && !is_minus_one(e.base())) return infix_product(e);
      return infix_pow(e);
    case ExprKind::Func: {
      const char* name = "";
      switch (e.func_kind()) {
        case FuncKind::Sin: name = "sin"; break;
        case FuncKind::Cos: name = "cos"; break;
        case FuncKind::Atan: name = "atan"; break;
        case FuncKind::Exp: name = "exp"; break;
      }
      return std::string(name) + "(" + infix(e.arg()) + ")";
    }
  }
  return "";
}

// ---- LaTeX ---------------------------------------------------------------------------

std::string latex(const Expr& e);

std::string latex_rational(const Rational& q) {
  if (q.is_integer()) return q.str();
  const std::string body = "\\frac{" + std::to_string(q.abs().num()) + "}{" + std::to_string(q.den()) + "}";
  return q.sign() < 0 ? "- " + body : body;
}

std::string latex_symbol(const Expr& e) {
  const std::string& n = e.name();
  if (n == "epsilon") return "\\epsilon";
  if (e.kind() == ExprKind::Param && n.size() >= 2 && n[0] == 'a') return "a_{" + n.substr(1) + "}";
  if (n.size() == 1 || n.find('\'') != std::string::npos) return n;
  if (is_greek(n)) return "\\" + n;
  return "\\mathrm{" + n + "}";
}

bool latex_atomic(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Int: return e.rational_value().sign() >= 0;
    case ExprKind::Float: return e.float_value() >= 0;
    case ExprKind::Imag:
    case ExprKind::Pi:
    case ExprKind::Param:
    case ExprKind::Var: return true;
    default: return false;
  }
}

std::string paren(const std::string& s) { return "\\left(" + s + "\\right)"; }

std::string latex_pow(const Expr& e) {
  const Expr& b = e.base();
  const Rational& r = e.exponent();
  if (r.num() == 1 && r.den() == 2) return "\\sqrt{" + latex(b) + "}";
  if (r.num() == 1 && r.den() > 2) return "\\sqrt[" + std::to_string(r.den()) + "]{" + latex(b) + "}";
  std::string base = latex_atomic(b) ? latex(b) : paren(latex(b));
  return base + "^{" + latex_rational(r) + "}";
}

std::string latex_factor(const Expr& f) {
  if (f.kind() == ExprKind::Sum) return paren(latex(f));
  if (f.kind() == ExprKind::Pow) return latex_pow(f);
  if (f.is_number() && !latex_atomic(f)) return paren(latex(f));
  return latex(f);
}

bool moves_to_denominator(const Expr& base) {
  switch (base.kind()) {
    case ExprKind::Param:
    case ExprKind::Var:
    case ExprKind::Pi:
    case ExprKind::Int:
    case ExprKind::Func: return true;
    default: return false;
  }
}

std::string latex_product(const Expr& e) {
  Split s = split_product(e, moves_to_denominator);
  std::string sign;
  std::vector<std::string> num;
  std::vector<std::string> den;
  if (s.coef.is_exact_number()) {
    Rational q = s.coef.rational_value();
    if (q.sign() < 0) {
      sign = "- ";
      q = -q;
    }
    if (q.num() != 1) num.push_back(std::to_string(q.num()));
    if (q.den() != 1) den.push_back(std::to_string(q.den()));
  } else {
    double v = s.coef.float_value();
    if (v < 0) {
      sign = "- ";
      v = -v;
    }
    num.push_back(float_text(v));
  }
  for (const Expr& f : s.num) num.push_back(latex_factor(f));
  for (const Expr& f : s.den) den.push_back(latex_factor(f));

  auto join = [](const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " " : "") + parts[i];
    return out;
  };
  const std::string top = num.empty() ? "1" : join(num);
  if (den.empty()) return sign + top;
  return sign + "\\frac{" + top + "}{" + join(den) + "}";
}

std::string latex(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Int:
    case ExprKind::Rat: return latex_rational(e.rational_value());
    case ExprKind::Float: return float_text(e.float_value());
    case ExprKind::Imag: return "i";
    case ExprKind::Pi: return "\\pi";
    case ExprKind::Param:
    case ExprKind::Var: return latex_symbol(e);
    case ExprKind::Sum: {
      std::string out;
      bool first = true;
      for (const Expr& t : e.children()) {
        std::string s = latex(t);
        if (first) {
          out = s;
        } else if (starts_negative(s)) {
          out += " - " + strip_sign(s);
        } else {
          out += " + " + s;
        }
        first = false;
      }
      return out;
    }
    case ExprKind::Prod: return latex_product(e);
    case ExprKind::Pow:
      if (e.exponent().sign() < 0 && moves_to_denominator(e.base())) return latex_product(e);
      return latex_pow(e);
    case ExprKind::Func: {
      const std::string arg = latex(e.arg());
      switch (e.func_kind()) {
        case FuncKind::Sin: return "\\sin{\\left(" + arg + " \\right)}";
        case FuncKind::Cos: return "\\cos{\\left(" + arg + " \\right)}";
        case FuncKind::Atan: return "\\operatorname{atan}{\\left(" + arg + " \\right)}";
        case FuncKind::Exp: return "e^{" + arg + "}";
      }
    }
  }
  return "";
}

}  // namespace

std::string render_latex(const Expr& e) { return latex(e); }
std::string render_infix(const Expr& e) { return infix(e); }

}  // namespace asymgen
