#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <string>
#include <vector>

#include "asymgen/expr.hpp"

namespace asymgen {
namespace {

enum class Tok { Num, Ident, Cmd, Sym, End };

struct Token {
  Tok type;
  std::string text;
  std::size_t offset;
};

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }

const char* const kFunctionWords[] = {"sin", "cos", "exp", "atan", "arctan", "sqrt", "pi", "epsilon"};
const char* const kRejectedWords[] = {"tan", "log", "ln", "sinh", "cosh", "tanh", "sec", "csc", "cot"};
const char* const kGreekCmds[] = {"alpha", "beta", "gamma", "delta", "eta",   "theta", "kappa", "lambda",
                                  "mu",    "nu",   "xi",    "rho",   "sigma", "tau",   "phi",   "chi",
                                  "psi",   "omega", "zeta", "iota",  "Gamma", "Delta", "Lambda", "Omega"};

template <std::size_t N>
bool contains(const char* const (&list)[N], std::string_view s) {
  for (const char* w : list) {
    if (s == w) return true;
  }
  return false;
}

std::vector<Token> tokenize(std::string_view src, Dialect dialect) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    const std::size_t start = i;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    // A few common UTF-8 symbols.
    auto utf8 = [&](std::string_view seq, Tok type, const char* text) {
      if (src.substr(i, seq.size()) == seq) {
        out.push_back({type, text, start});
        i += seq.size();
        return true;
      }
      return false;
    };
    if (static_cast<unsigned char>(c) >= 0x80) {
      if (utf8("\xCE\xB5", Tok::Ident, "epsilon") || utf8("\xCF\x80", Tok::Ident, "pi") ||
          utf8("\xE2\x88\x92", Tok::Sym, "-") || utf8("\xC2\xB7", Tok::Sym, "*") ||
          utf8("\xC3\x97", Tok::Sym, "*") || utf8("\xCE\xB4", Tok::Ident, "delta")) {
        continue;
      }
      throw SyntaxError("unexpected character", start);
    }
    if (is_digit(c) || (c == '.' && i + 1 < src.size() && is_digit(src[i + 1]))) {
      while (i < src.size() && is_digit(src[i])) ++i;
      if (i < src.size() && src[i] == '.') {
        ++i;
        while (i < src.size() && is_digit(src[i])) ++i;
      }
      if (dialect == Dialect::Infix && i + 1 < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (src[j] == '+' || src[j] == '-') ++j;
        if (j < src.size() && is_digit(src[j])) {
          while (j < src.size() && is_digit(src[j])) ++j;
          i = j;
        }
      }
      out.push_back({Tok::Num, std::string(src.substr(start, i - start)), start});
      continue;
    }
    if (c == '\\') {
      ++i;
      if (i < src.size() && !is_alpha(src[i])) {
        const char s = src[i++];
        if (s == ',' || s == ';' || s == '!' || s == ' ' || s == ':') continue;
        if (s == '{' || s == '}') {
          out.push_back({Tok::Sym, std::string(1, s), start});
          continue;
        }
        throw SyntaxError(std::string("unexpected escape \\") + s, start);
      }
      while (i < src.size() && is_alpha(src[i])) ++i;
      std::string name(src.substr(start + 1, i - start - 1));
      if (name.empty()) throw SyntaxError("dangling backslash", start);
      if (name == "quad" || name == "qquad" || name == "displaystyle") continue;
      out.push_back({Tok::Cmd, std::move(name), start});
      continue;
    }
    if (is_alpha(c)) {
      if (dialect == Dialect::Infix) {
        while (i < src.size() && (is_alnum(src[i]) || src[i] == '_')) ++i;
        out.push_back({Tok::Ident, std::string(src.substr(start, i - start)), start});
        continue;
      }
      std::size_t j = i;
      while (j < src.size() && is_alpha(src[j])) ++j;
      const std::string_view run = src.substr(i, j - i);
      if (contains(kFunctionWords, run)) {
        out.push_back({Tok::Ident, std::string(run), start});
        i = j;
        continue;
      }
      if (contains(kRejectedWords, run)) throw UnknownSymbol(std::string(run), start);
      out.push_back({Tok::Ident, std::string(1, c), start});
      ++i;
      continue;
    }
    if (c == '*' && i + 1 < src.size() && src[i + 1] == '*') {
      out.push_back({Tok::Sym, "^", start});
      i += 2;
      continue;
    }
    if (std::string_view("+-*/^()[]{}!_,=").find(c) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, c), start});
      ++i;
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", start);
  }
  out.push_back({Tok::End, "", src.size()});
  return out;
}

Expr factorial(const Expr& n, std::size_t offset) {
  if (n.kind() != ExprKind::Int || n.rational_value().sign() < 0 || n.rational_value().num() > 20) {
    throw SyntaxError("factorial needs a small non-negative integer", offset);
  }
  std::int64_t acc = 1;
  for (std::int64_t k = 2; k <= n.rational_value().num(); ++k) acc *= k;
  return Expr::integer(acc);
}

class Parser {
 public:
  Parser(std::string_view src, Dialect d) : toks_(tokenize(src, d)), dialect_(d) {}

  Expr parse_all() {
    Expr e = expr();
    if (peek().type != Tok::End) throw SyntaxError("unexpected '" + peek().text + "'", peek().offset);
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Dialect dialect_;

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool is_sym(const char* s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.type == Tok::Sym && t.text == s;
  }
  bool is_cmd(const char* s) const { return peek().type == Tok::Cmd && peek().text == s; }

  void expect_sym(const char* s) {
    skip_sizing();
    if (!is_sym(s)) throw SyntaxError(std::string("expected '") + s + "'", peek().offset);
    ++pos_;
  }

  // \left and \right only size delimiters.
  void skip_sizing() {
    while (peek().type == Tok::Cmd &&
           (peek().text == "left" || peek().text == "right" || peek().text == "bigl" || peek().text == "bigr" ||
            peek().text == "Bigl" || peek().text == "Bigr" || peek().text == "big" || peek().text == "Big")) {
      ++pos_;
    }
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (is_sym("+")) {
        ++pos_;
        terms.push_back(term());
      } else if (is_sym("-")) {
        ++pos_;
        terms.push_back(-term());
      } else {
        break;
      }
    }
    return Expr::sum(std::move(terms));
  }

  bool starts_operand() const {
    const Token& t = peek();
    switch (t.type) {
      case Tok::Num:
      case Tok::Ident: return true;
      case Tok::Cmd:
        return t.text != "right" && t.text != "cdot" && t.text != "times" && t.text != "bigr" && t.text != "Bigr";
      case Tok::Sym: return t.text == "(" || t.text == "[" || t.text == "{";
      default: return false;
    }
  }

  Expr term() {
    std::vector<Expr> factors{unary()};
    for (;;) {
      if (is_sym("*") || is_cmd("cdot") || is_cmd("times")) {
        ++pos_;
        factors.push_back(unary());
      } else if (is_sym("/")) {
        ++pos_;
        factors.push_back(Expr::power(unary(), Rational(-1)));
      } else if (starts_operand()) {
        factors.push_back(power());
      } else {
        break;
      }
    }
    return Expr::product(std::move(factors));
  }

  Expr unary() {
    if (is_sym("-")) {
      ++pos_;
      return -unary();
    }
    if (is_sym("+")) {
      ++pos_;
      return unary();
    }
    return power();
  }

  Expr power() {
    const std::size_t at = peek().offset;
    const bool euler = peek().type == Tok::Ident && peek().text == "e" && is_sym("^", 1);
    if (euler) {
      pos_ += 2;
      return exp(exponent_operand());
    }
    Expr base = primary();
    while (is_sym("!")) {
      ++pos_;
      base = factorial(base, at);
    }
    if (is_sym("^")) {
      ++pos_;
      const std::size_t eat = peek().offset;
      return Expr::power(base, numeric_exponent(exponent_operand(), eat));
    }
    return base;
  }

  Rational numeric_exponent(const Expr& e, std::size_t offset) {
    if (e.is_exact_number()) return e.rational_value();
    if (e.kind() == ExprKind::Float) {
      if (auto r = Rational::from_double(e.float_value())) return *r;
    }
    throw SyntaxError("exponent must be a number", offset);
  }

  Expr exponent_operand() {
    if (is_sym("{")) {
      ++pos_;
      Expr e = expr();
      expect_sym("}");
      return e;
    }
    if (dialect_ == Dialect::LatexLite && peek().type == Tok::Num) {
      // LaTeX binds a single character: x^23 is x^2 * 3.
      Token& t = toks_[pos_];
      if (t.text.size() > 1) {
        Expr d = Expr::integer(t.text[0] - '0');
        t.text.erase(0, 1);
        t.offset += 1;
        return d;
      }
    }
    return unary_power_operand();
  }

  Expr unary_power_operand() {
    if (is_sym("-")) {
      ++pos_;
      return -unary_power_operand();
    }
    if (is_sym("+")) {
      ++pos_;
      return unary_power_operand();
    }
    return power();
  }

  Expr braced_or_single() {
    if (is_sym("{")) {
      ++pos_;
      Expr e = expr();
      expect_sym("}");
      return e;
    }
    if (peek().type == Tok::Num) {
      Token& t = toks_[pos_];
      if (t.text.size() > 1) {
        Expr d = Expr::integer(t.text[0] - '0');
        t.text.erase(0, 1);
        t.offset += 1;
        return d;
      }
    }
    return primary();
  }

  std::string braced_name() {
    expect_sym("{");
    std::string name;
    while (!is_sym("}")) {
      const Token t = next();
      if (t.type == Tok::End) throw SyntaxError("unterminated group", t.offset);
      name += t.text;
    }
    ++pos_;
    return name;
  }

  Expr subscripted(std::string name) {
    if (is_sym("_")) {
      ++pos_;
      if (is_sym("{")) {
        name += braced_name();
      } else {
        const Token t = next();
        if (t.type == Tok::Num) {
          name += t.text.substr(0, 1);
          if (t.text.size() > 1) {
            --pos_;
            toks_[pos_].text.erase(0, 1);
          }
        } else {
          name += t.text;
        }
      }
    }
    return Expr::symbol(name);
  }

  // Argument of a named function: braced, parenthesized, or a bare operand.
  Expr function_argument() {
    skip_sizing();
    if (is_sym("{")) {
      ++pos_;
      Expr e = expr();
      expect_sym("}");
      return e;
    }
    if (is_sym("(") || is_sym("[")) return primary();
    return power();
  }

  Expr apply_function(FuncKind kind) {
    std::optional<Rational> outer;
    if (is_sym("^")) {
      ++pos_;
      const std::size_t at = peek().offset;
      outer = numeric_exponent(exponent_operand(), at);
    }
    Expr f = Expr::func(kind, function_argument());
    return outer ? Expr::power(f, *outer) : f;
  }

  Expr primary() {
    skip_sizing();
    const Token t = peek();
    switch (t.type) {
      case Tok::Num: {
        ++pos_;
        if (t.text.find_first_of(".eE") == std::string::npos) {
          std::int64_t v = 0;
          auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
          if (res.ec == std::errc()) return Expr::integer(v);
        }
        double d = 0;
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), d);
        return Expr::real(d);
      }
      case Tok::Ident: return identifier();
      case Tok::Cmd: return command();
      case Tok::Sym:
        if (t.text == "(" || t.text == "[") {
          ++pos_;
          Expr e = expr();
          expect_sym(t.text == "(" ? ")" : "]");
          return e;
        }
        if (t.text == "{") {
          ++pos_;
          Expr e = expr();
          expect_sym("}");
          return e;
        }
        throw SyntaxError("unexpected '" + t.text + "'", t.offset);
      case Tok::End: throw SyntaxError("unexpected end of input", t.offset);
    }
    throw SyntaxError("unexpected token", t.offset);
  }

  Expr identifier() {
    const Token t = next();
    const std::string& n = t.text;
    auto fk = function_kind(n);
    if (fk) return apply_function(*fk);
    if (n == "sqrt") return Expr::power(function_argument(), Rational(1, 2));
    if (n == "pi") return Expr::pi();
    if (n == "i") return Expr::imag_unit();
    if (n == "e") return exp(Expr::integer(1));
    if (dialect_ == Dialect::Infix) {
      if (contains(kRejectedWords, n) ||
          (n.size() > 1 && is_sym("(") && !contains(kGreekCmds, n) && n != "epsilon" && !is_param_name(n))) {
        throw UnknownSymbol(n, t.offset);
      }
      return Expr::symbol(n);
    }
    return subscripted(n);
  }

  static bool is_param_name(const std::string& n) {
    return n.size() >= 2 && n[0] == 'a' && std::all_of(n.begin() + 1, n.end(), is_digit);
  }

  static std::optional<FuncKind> function_kind(const std::string& n) {
    if (n == "sin") return FuncKind::Sin;
    if (n == "cos") return FuncKind::Cos;
    if (n == "exp") return FuncKind::Exp;
    if (n == "atan" || n == "arctan") return FuncKind::Atan;
    return std::nullopt;
  }

  Expr command() {
    const Token t = next();
    const std::string& n = t.text;
    if (n == "frac" || n == "dfrac" || n == "tfrac") {
      Expr num = braced_or_single();
      Expr den = braced_or_single();
      return num / den;
    }
    if (n == "sqrt") {
      Rational r(1, 2);
      if (is_sym("[")) {
        ++pos_;
        const std::size_t at = peek().offset;
        Expr idx = expr();
        expect_sym("]");
        if (idx.kind() != ExprKind::Int || idx.rational_value().sign() <= 0) {
          throw SyntaxError("root index must be a positive integer", at);
        }
        r = Rational(1, idx.rational_value().num());
      }
      return Expr::power(braced_or_single(), r);
    }
    if (n == "epsilon" || n == "varepsilon") return subscripted("epsilon");
    if (n == "pi") return Expr::pi();
    if (contains(kGreekCmds, n)) return subscripted(n);
    if (n == "sin") return apply_function(FuncKind::Sin);
    if (n == "cos") return apply_function(FuncKind::Cos);
    if (n == "exp") return apply_function(FuncKind::Exp);
    if (n == "arctan") return apply_function(FuncKind::Atan);
    if (n == "tan") {
      // Only the inverse \tan^{-1} is supported.
      if (is_sym("^")) {
        const std::size_t save = pos_;
        ++pos_;
        Expr e = exponent_operand();
        if (e.kind() == ExprKind::Int && e.rational_value() == Rational(-1)) {
          return Expr::func(FuncKind::Atan, function_argument());
        }
        pos_ = save;
      }
      throw UnknownSymbol("\\tan", t.offset);
    }
    if (n == "operatorname") {
      const std::string name = braced_name();
      if (name == "atan" || name == "arctan") return apply_function(FuncKind::Atan);
      throw UnknownSymbol(name, t.offset);
    }
    if (n == "mathrm") {
      const std::string name = braced_name();
      if (auto fk = function_kind(name)) return apply_function(*fk);
      if (name == "e") {
        if (is_sym("^")) {
          ++pos_;
          return exp(exponent_operand());
        }
        return exp(Expr::integer(1));
      }
      return Expr::symbol(name);
    }
    throw UnknownSymbol("\\" + n, t.offset);
  }
};

}  // namespace

Expr parse(std::string_view src, Dialect dialect) { return Parser(src, dialect).parse_all(); }

}  // namespace asymgen
