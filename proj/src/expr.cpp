#include "asymgen/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace asymgen {

struct Expr::Node {
  ExprKind kind = ExprKind::Int;
  Rational q;  // Int/Rat value, Pow exponent
  double f = 0.0;
  std::string name;
  FuncKind fk = FuncKind::Sin;
  std::vector<Expr> kids;
};

// Raw node construction; bypasses canonicalization.
struct ExprBuild {
  static Expr make(Expr::Node n) { return Expr(std::make_shared<const Expr::Node>(std::move(n))); }
  static const Expr::Node& node(const Expr& e) { return *e.node_; }

  static Expr number(const Rational& q) {
    Expr::Node n;
    n.kind = q.is_integer() ? ExprKind::Int : ExprKind::Rat;
    n.q = q;
    return make(std::move(n));
  }
  static Expr real(double v) {
    Expr::Node n;
    n.kind = ExprKind::Float;
    n.f = v == 0.0 ? 0.0 : v;
    return make(std::move(n));
  }
  static Expr raw_pow(const Expr& base, const Rational& e) {
    Expr::Node n;
    n.kind = ExprKind::Pow;
    n.q = e;
    n.kids = {base};
    return make(std::move(n));
  }
  static Expr raw_nary(ExprKind kind, std::vector<Expr> kids) {
    Expr::Node n;
    n.kind = kind;
    n.kids = std::move(kids);
    return make(std::move(n));
  }
};

namespace {

// Numeric constant during folding: exact while possible, double afterwards.
struct Num {
  bool exact = true;
  Rational q;
  double f = 0.0;

  static Num of(const Expr& e) {
    if (e.is_exact_number()) return {true, e.rational_value(), 0.0};
    return {false, Rational(0), e.float_value()};
  }
  double value() const { return exact ? q.to_double() : f; }
  bool is_zero() const { return exact ? q.is_zero() : f == 0.0; }
  bool is_one() const { return exact && q == Rational(1); }
  Expr to_expr() const { return exact ? ExprBuild::number(q) : ExprBuild::real(f); }

  Num& operator+=(const Num& o) {
    if (exact && o.exact) {
      try {
        q += o.q;
        return *this;
      } catch (const std::overflow_error&) {
      }
    }
    f = value() + o.value();
    exact = false;
    return *this;
  }
  Num& operator*=(const Num& o) {
    if (exact && o.exact) {
      try {
        q *= o.q;
        return *this;
      } catch (const std::overflow_error&) {
      }
    }
    f = value() * o.value();
    exact = false;
    return *this;
  }
};

bool is_minus_one(const Expr& e) {
  return e.kind() == ExprKind::Int && e.rational_value() == Rational(-1);
}

// Phase factors: i and (-1)^r.
bool is_phase(const Expr& e) {
  return e.kind() == ExprKind::Imag ||
         (e.kind() == ExprKind::Pow && is_minus_one(e.base()));
}

const Expr& base_of(const Expr& e) { return e.kind() == ExprKind::Pow ? e.base() : e; }

Rational exponent_of(const Expr& e) { return e.kind() == ExprKind::Pow ? e.exponent() : Rational(1); }

int factor_class(const Expr& f) {
  if (f.is_number()) return 0;
  if (is_phase(f)) return 1;
  const Expr& b = base_of(f);
  switch (b.kind()) {
    case ExprKind::Int:
    case ExprKind::Rat:
    case ExprKind::Float: return 2;
    case ExprKind::Pi: return 3;
    case ExprKind::Param: return 4;
    case ExprKind::Var: return 5;
    case ExprKind::Func: return 6;
    case ExprKind::Sum: return 7;
    default: return 8;
  }
}

bool factor_less(const Expr& a, const Expr& b) {
  const int ca = factor_class(a);
  const int cb = factor_class(b);
  if (ca != cb) return ca < cb;
  if (int c = compare(base_of(a), base_of(b)); c != 0) return c < 0;
  return exponent_of(a) < exponent_of(b);
}

Rational var_degree(const Expr& term) {
  auto one = [](const Expr& f) -> Rational {
    if (f.kind() == ExprKind::Var) return Rational(1);
    if (f.kind() == ExprKind::Pow && f.base().kind() == ExprKind::Var) return f.exponent();
    return Rational(0);
  };
  if (term.kind() != ExprKind::Prod) return one(term);
  Rational d(0);
  for (const Expr& f : term.children()) d += one(f);
  return d;
}

bool term_less(const Expr& a, const Expr& b) {
  const Rational da = var_degree(a);
  const Rational db = var_degree(b);
  if (da != db) return da > db;
  if (a.is_number() != b.is_number()) return !a.is_number();
  return compare(a, b) < 0;
}

// Reduces r into (-1, 1].
Rational reduce_phase(Rational r) {
  const Rational two(2);
  const std::int64_t k = ((r + Rational(1)) / two).floor();
  r -= Rational(2 * k);
  if (r <= Rational(-1)) r += two;
  if (r > Rational(1)) r -= two;
  return r;
}

Expr phase_expr(const Rational& r) {
  const Rational s = reduce_phase(r);
  if (s.is_zero()) return Expr::integer(1);
  if (s == Rational(1)) return Expr::integer(-1);
  if (s == Rational(1, 2)) return Expr::imag_unit();
  if (s == Rational(-1, 2)) return ExprBuild::raw_nary(ExprKind::Prod, {Expr::integer(-1), Expr::imag_unit()});
  return ExprBuild::raw_pow(Expr::integer(-1), s);
}

// Factorization by trial division; n must be modest.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    int k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    if (k) out.emplace_back(p, k);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

constexpr std::int64_t kMaxFactorable = 1'000'000'000'000LL;

Expr power_of_rational(const Rational& q, const Rational& e) {
  if (q.is_zero()) {
    if (e.sign() > 0) return Expr::integer(0);
    return ExprBuild::raw_pow(Expr::integer(0), e);
  }
  if (e.is_integer()) {
    try {
      return ExprBuild::number(q.pow(e.num()));
    } catch (const std::overflow_error&) {
      return ExprBuild::real(std::pow(q.to_double(), e.to_double()));
    }
  }
  if (q == Rational(-1)) return phase_expr(e);
  if (q.sign() < 0) return Expr::product({phase_expr(e), power_of_rational(-q, e)});
  if (q == Rational(1)) return Expr::integer(1);

  const std::int64_t k = e.floor();
  const Rational r = e - Rational(k);
  const std::int64_t s = r.num();
  const std::int64_t n = r.den();
  try {
    Rational coef = q.pow(k);
    const std::int64_t radicand = checked_mul(ipow(q.num(), s), ipow(q.den(), n - s));
    if (radicand > kMaxFactorable) throw std::overflow_error("radicand too large");
    std::int64_t outside = 1;
    std::int64_t inside = 1;
    auto factors = factorize(radicand);
    std::int64_t g = n;
    for (auto& [p, mult] : factors) {
      outside = checked_mul(outside, ipow(p, mult / n));
      mult %= n;
      g = std::gcd(g, static_cast<std::int64_t>(mult));
    }
    for (const auto& [p, mult] : factors) {
      if (mult) inside = checked_mul(inside, ipow(p, mult / g));
    }
    coef = coef * Rational(outside) / Rational(q.den());
    if (inside == 1) return ExprBuild::number(coef);
    Expr radical = ExprBuild::raw_pow(ExprBuild::number(Rational(inside)), Rational(1, n / g));
    if (coef == Rational(1)) return radical;
    return ExprBuild::raw_nary(ExprKind::Prod, {ExprBuild::number(coef), radical});
  } catch (const std::overflow_error&) {
    return ExprBuild::real(std::pow(q.to_double(), e.to_double()));
  }
}

}  // namespace

// ---- construction -------------------------------------------------------------

Expr::Expr() : Expr(ExprBuild::number(Rational(0))) {}
Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::integer(std::int64_t v) { return ExprBuild::number(Rational(v)); }
Expr Expr::rational(const Rational& q) { return ExprBuild::number(q); }
Expr Expr::real(double v) { return ExprBuild::real(v); }

Expr Expr::imag_unit() {
  Node n;
  n.kind = ExprKind::Imag;
  return ExprBuild::make(std::move(n));
}

Expr Expr::pi() {
  Node n;
  n.kind = ExprKind::Pi;
  return ExprBuild::make(std::move(n));
}

Expr Expr::param(std::string name) {
  Node n;
  n.kind = ExprKind::Param;
  n.name = std::move(name);
  return ExprBuild::make(std::move(n));
}

Expr Expr::var(std::string name) {
  Node n;
  n.kind = ExprKind::Var;
  n.name = std::move(name);
  return ExprBuild::make(std::move(n));
}

Expr Expr::symbol(std::string_view name) {
  if (name == "pi") return pi();
  if (name == "epsilon") return param(std::string(name));
  if (name.size() >= 2 && name[0] == 'a' &&
      std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return param(std::string(name));
  }
  return var(std::string(name));
}

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  for (Expr& t : terms) {
    if (t.kind() == ExprKind::Sum) {
      for (const Expr& c : t.children()) flat.push_back(c);
    } else {
      flat.push_back(std::move(t));
    }
  }

  Num constant;
  bool constant_seen = false;
  std::vector<std::pair<Expr, Num>> groups;
  for (const Expr& t : flat) {
    if (t.is_number()) {
      constant += Num::of(t);
      constant_seen = true;
      continue;
    }
    Num coef;
    Expr rest = t;
    if (t.kind() == ExprKind::Prod && t.children().front().is_number()) {
      coef = Num::of(t.children().front());
      std::vector<Expr> others(t.children().begin() + 1, t.children().end());
      rest = others.size() == 1 ? others.front() : ExprBuild::raw_nary(ExprKind::Prod, std::move(others));
    } else {
      coef.q = Rational(1);
    }
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == rest; });
    if (it == groups.end()) {
      groups.emplace_back(rest, coef);
    } else {
      it->second += coef;
    }
  }

  std::vector<Expr> out;
  for (auto& [rest, coef] : groups) {
    if (coef.is_zero()) continue;
    out.push_back(coef.is_one() ? rest : product({coef.to_expr(), rest}));
  }
  // A coefficient times a rest can fold (e.g. 2*i*i); fold once more if so.
  if (std::any_of(out.begin(), out.end(), [](const Expr& e) { return e.is_number() || e.kind() == ExprKind::Sum; })) {
    if (!constant.is_zero()) out.push_back(constant.to_expr());
    return sum(std::move(out));
  }
  if (!constant.is_zero()) out.push_back(constant.to_expr());
  if (out.empty()) return (constant_seen && !constant.exact) ? ExprBuild::real(0.0) : integer(0);
  if (out.size() == 1) return out.front();
  std::sort(out.begin(), out.end(), term_less);
  return ExprBuild::raw_nary(ExprKind::Sum, std::move(out));
}

Expr Expr::product(std::vector<Expr> factors) {
  std::vector<Expr> work = std::move(factors);
  Num coef;
  coef.q = Rational(1);
  Rational phase(0);
  std::vector<Expr> out;

  for (int iter = 0; iter < 16; ++iter) {
    std::vector<Expr> flat;
    for (Expr& f : work) {
      if (f.kind() == ExprKind::Prod) {
        for (const Expr& c : f.children()) flat.push_back(c);
      } else {
        flat.push_back(std::move(f));
      }
    }

    std::vector<std::pair<Expr, Rational>> groups;
    for (const Expr& f : flat) {
      if (f.is_number()) {
        coef *= Num::of(f);
      } else if (f.kind() == ExprKind::Imag) {
        phase += Rational(1, 2);
      } else if (f.kind() == ExprKind::Pow && is_minus_one(f.base())) {
        phase += f.exponent();
      } else {
        const Expr& b = base_of(f);
        const Rational e = exponent_of(f);
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == b; });
        if (it == groups.end()) {
          groups.emplace_back(b, e);
        } else {
          try {
            it->second += e;
          } catch (const std::overflow_error&) {
            throw DomainError("exponent overflow");
          }
        }
      }
    }
    if (coef.is_zero()) return coef.to_expr();

    out.clear();
    std::vector<Expr> reinject;
    for (const auto& [b, e] : groups) {
      if (e.is_zero()) continue;
      Expr p = power(b, e);
      const bool settled = !p.is_number() && p.kind() != ExprKind::Prod && !is_phase(p) &&
                           base_of(p) == b;
      if (settled) {
        out.push_back(p);
      } else {
        reinject.push_back(p);
      }
    }
    if (reinject.empty()) break;
    work = std::move(reinject);
    for (Expr& e : out) work.push_back(std::move(e));
    out.clear();
  }

  const Rational s = reduce_phase(phase);
  if (s == Rational(1) || s == Rational(-1, 2)) coef *= Num{true, Rational(-1), 0.0};
  if (s == Rational(1, 2) || s == Rational(-1, 2)) {
    out.push_back(imag_unit());
  } else if (!s.is_zero() && s != Rational(1)) {
    out.push_back(ExprBuild::raw_pow(integer(-1), s));
  }

  if (coef.is_zero()) return coef.to_expr();
  if (out.empty()) return coef.to_expr();
  std::sort(out.begin(), out.end(), factor_less);
  if (coef.is_one() && out.size() == 1) return out.front();
  if (!coef.is_one()) out.insert(out.begin(), coef.to_expr());
  return ExprBuild::raw_nary(ExprKind::Prod, std::move(out));
}

Expr Expr::power(const Expr& base, const Rational& e) {
  if (e.is_zero()) return integer(1);
  if (e == Rational(1)) return base;
  switch (base.kind()) {
    case ExprKind::Int:
    case ExprKind::Rat: return power_of_rational(base.rational_value(), e);
    case ExprKind::Float: {
      const double f = base.float_value();
      if (e.is_integer() || f > 0) return real(std::pow(f, e.to_double()));
      if (f < 0) return product({phase_expr(e), real(std::pow(-f, e.to_double()))});
      if (e.sign() > 0) return real(0.0);
      return ExprBuild::raw_pow(base, e);
    }
    case ExprKind::Imag: return phase_expr(e / Rational(2));
    case ExprKind::Pow: {
      const Expr& inner = base.base();
      if (e.is_integer() || is_positive(inner) || is_minus_one(inner)) {
        try {
          return power(inner, base.exponent() * e);
        } catch (const std::overflow_error&) {
        }
      }
      return ExprBuild::raw_pow(base, e);
    }
    case ExprKind::Prod: {
      if (e.is_integer()) {
        std::vector<Expr> parts;
        for (const Expr& f : base.children()) parts.push_back(power(f, e));
        return product(std::move(parts));
      }
      std::vector<Expr> positive;
      std::vector<Expr> rest;
      for (const Expr& f : base.children()) {
        if (is_positive(f)) {
          positive.push_back(power(f, e));
        } else {
          rest.push_back(f);
        }
      }
      if (positive.empty()) return ExprBuild::raw_pow(base, e);
      if (!rest.empty()) {
        Expr r = rest.size() == 1 ? rest.front() : ExprBuild::raw_nary(ExprKind::Prod, rest);
        positive.push_back(power(r, e));
      }
      return product(std::move(positive));
    }
    case ExprKind::Func:
      if (base.func_kind() == FuncKind::Exp && e.is_integer()) {
        return func(FuncKind::Exp, product({rational(e), base.arg()}));
      }
      return ExprBuild::raw_pow(base, e);
    default: return ExprBuild::raw_pow(base, e);
  }
}

Expr Expr::func(FuncKind kind, const Expr& arg) {
  if (arg.is_exact_number() && arg.is_zero()) {
    return integer(kind == FuncKind::Cos || kind == FuncKind::Exp ? 1 : 0);
  }
  if (arg.is_number()) {
    const double x = arg.float_value();
    switch (kind) {
      case FuncKind::Sin: return real(std::sin(x));
      case FuncKind::Cos: return real(std::cos(x));
      case FuncKind::Atan: return real(std::atan(x));
      case FuncKind::Exp: return real(std::exp(x));
    }
  }
  Node n;
  n.kind = ExprKind::Func;
  n.fk = kind;
  n.kids = {arg};
  return ExprBuild::make(std::move(n));
}

// ---- accessors ----------------------------------------------------------------

ExprKind Expr::kind() const noexcept { return node_->kind; }

bool Expr::is_number() const noexcept {
  return kind() == ExprKind::Int || kind() == ExprKind::Rat || kind() == ExprKind::Float;
}

bool Expr::is_exact_number() const noexcept { return kind() == ExprKind::Int || kind() == ExprKind::Rat; }

bool Expr::is_zero() const noexcept {
  if (is_exact_number()) return node_->q.is_zero();
  return kind() == ExprKind::Float && node_->f == 0.0;
}

bool Expr::is_one() const noexcept { return kind() == ExprKind::Int && node_->q == Rational(1); }

const Rational& Expr::rational_value() const {
  if (!is_exact_number()) throw std::logic_error("rational_value on non-rational");
  return node_->q;
}

double Expr::float_value() const {
  if (kind() == ExprKind::Float) return node_->f;
  if (is_exact_number()) return node_->q.to_double();
  throw std::logic_error("float_value on non-number");
}

const std::string& Expr::name() const { return node_->name; }
const Expr& Expr::base() const { return node_->kids.front(); }
const Rational& Expr::exponent() const { return node_->q; }
FuncKind Expr::func_kind() const { return node_->fk; }
const Expr& Expr::arg() const { return node_->kids.front(); }
std::span<const Expr> Expr::children() const { return node_->kids; }

int compare(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return 0;
  const bool na = a.is_number();
  const bool nb = b.is_number();
  if (na && nb) {
    if (a.is_exact_number() && b.is_exact_number()) {
      const auto c = a.node_->q <=> b.node_->q;
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    const double x = a.float_value();
    const double y = b.float_value();
    if (x != y) return x < y ? -1 : 1;
    if (a.kind() == b.kind()) return 0;
    return a.kind() == ExprKind::Float ? 1 : -1;
  }
  if (na != nb) return na ? -1 : 1;
  if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case ExprKind::Imag:
    case ExprKind::Pi: return 0;
    case ExprKind::Param:
    case ExprKind::Var: {
      const int c = a.node_->name.compare(b.node_->name);
      return (c > 0) - (c < 0);
    }
    case ExprKind::Pow: {
      if (int c = compare(a.base(), b.base()); c != 0) return c;
      const auto c = a.node_->q <=> b.node_->q;
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case ExprKind::Func:
      if (a.node_->fk != b.node_->fk) return a.node_->fk < b.node_->fk ? -1 : 1;
      return compare(a.arg(), b.arg());
    default: {
      const auto& ka = a.node_->kids;
      const auto& kb = b.node_->kids;
      for (std::size_t i = 0; i < std::min(ka.size(), kb.size()); ++i) {
        if (int c = compare(ka[i], kb[i]); c != 0) return c;
      }
      if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
      return 0;
    }
  }
}

// ---- operators ------------------------------------------------------------------

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator-(const Expr& a) { return Expr::product({Expr::integer(-1), a}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::product({a, Expr::power(b, Rational(-1))}); }
Expr pow(const Expr& base, const Rational& exponent) { return Expr::power(base, exponent); }
Expr sqrt(const Expr& e) { return Expr::power(e, Rational(1, 2)); }
Expr sin(const Expr& e) { return Expr::func(FuncKind::Sin, e); }
Expr cos(const Expr& e) { return Expr::func(FuncKind::Cos, e); }
Expr atan(const Expr& e) { return Expr::func(FuncKind::Atan, e); }
Expr exp(const Expr& e) { return Expr::func(FuncKind::Exp, e); }

// ---- calculus and evaluation -------------------------------------------------------

Expr differentiate(const Expr& e, std::string_view var) {
  switch (e.kind()) {
    case ExprKind::Param:
    case ExprKind::Var: return Expr::integer(e.name() == var ? 1 : 0);
    case ExprKind::Sum: {
      std::vector<Expr> terms;
      for (const Expr& t : e.children()) terms.push_back(differentiate(t, var));
      return Expr::sum(std::move(terms));
    }
    case ExprKind::Prod: {
      const auto kids = e.children();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        Expr d = differentiate(kids[i], var);
        if (d.is_zero()) continue;
        std::vector<Expr> factors(kids.begin(), kids.end());
        factors[i] = d;
        terms.push_back(Expr::product(std::move(factors)));
      }
      return Expr::sum(std::move(terms));
    }
    case ExprKind::Pow: {
      Expr db = differentiate(e.base(), var);
      if (db.is_zero()) return Expr::integer(0);
      return Expr::product({Expr::rational(e.exponent()), Expr::power(e.base(), e.exponent() - Rational(1)), db});
    }
    case ExprKind::Func: {
      const Expr& u = e.arg();
      Expr du = differentiate(u, var);
      if (du.is_zero()) return Expr::integer(0);
      switch (e.func_kind()) {
        case FuncKind::Sin: return cos(u) * du;
        case FuncKind::Cos: return -(sin(u) * du);
        case FuncKind::Atan: return du / (Expr::integer(1) + pow(u, Rational(2)));
        case FuncKind::Exp: return e * du;
      }
      return Expr::integer(0);
    }
    default: return Expr::integer(0);
  }
}

namespace {

Complex normalize(Complex z) {
  // A signed zero imaginary part would flip the principal branch.
  if (z.imag() == 0.0) z = Complex(z.real(), 0.0);
  return z;
}

Complex rational_power(Complex b, const Rational& r, Branch branch) {
  b = normalize(b);
  if (r.is_integer()) {
    std::int64_t n = r.num();
    if (b == Complex(0.0, 0.0)) {
      if (n < 0) throw DomainError("zero raised to a negative power");
      return n == 0 ? Complex(1.0) : Complex(0.0);
    }
    const bool invert = n < 0;
    std::uint64_t m = invert ? static_cast<std::uint64_t>(-n) : static_cast<std::uint64_t>(n);
    Complex result(1.0), x = b;
    while (m) {
      if (m & 1) result *= x;
      m >>= 1;
      if (m) x *= x;
    }
    return invert ? Complex(1.0) / result : result;
  }
  if (b == Complex(0.0, 0.0)) {
    if (r.sign() < 0) throw DomainError("zero raised to a negative power");
    return Complex(0.0);
  }
  if (b.imag() == 0.0 && b.real() > 0.0) return Complex(std::pow(b.real(), r.to_double()), 0.0);
  if (branch == Branch::RealOddRoot && b.imag() == 0.0 && r.den() % 2 != 0) {
    const double mag = std::pow(-b.real(), r.to_double());
    return Complex(r.num() % 2 != 0 ? -mag : mag, 0.0);
  }
  return std::exp(r.to_double() * std::log(b));
}

}  // namespace

Complex eval(const Expr& e, const Bindings& b, Branch branch) {
  switch (e.kind()) {
    case ExprKind::Int:
    case ExprKind::Rat:
    case ExprKind::Float: return Complex(e.float_value(), 0.0);
    case ExprKind::Imag: return Complex(0.0, 1.0);
    case ExprKind::Pi: return Complex(std::numbers::pi, 0.0);
    case ExprKind::Param:
    case ExprKind::Var: {
      auto it = b.find(e.name());
      if (it == b.end()) throw UnboundSymbol(e.name());
      return it->second;
    }
    case ExprKind::Sum: {
      Complex s(0.0);
      for (const Expr& t : e.children()) s += eval(t, b, branch);
      return s;
    }
    case ExprKind::Prod: {
      Complex p(1.0);
      for (const Expr& t : e.children()) p *= eval(t, b, branch);
      return p;
    }
    case ExprKind::Pow: {
      if (e.base().kind() == ExprKind::Int && e.base().rational_value() == Rational(-1) &&
          !(branch == Branch::RealOddRoot && e.exponent().den() % 2 != 0)) {
        const double t = std::numbers::pi * e.exponent().to_double();
        return Complex(std::cos(t), std::sin(t));
      }
      return rational_power(eval(e.base(), b, branch), e.exponent(), branch);
    }
    case ExprKind::Func: {
      const Complex u = eval(e.arg(), b, branch);
      switch (e.func_kind()) {
        case FuncKind::Sin: return std::sin(u);
        case FuncKind::Cos: return std::cos(u);
        case FuncKind::Atan: return u.imag() == 0.0 ? Complex(std::atan(u.real()), 0.0) : std::atan(u);
        case FuncKind::Exp: return std::exp(u);
      }
    }
  }
  return Complex(0.0);
}

RealFn compile_real(const Expr& e, std::string_view var, const std::map<std::string, double, std::less<>>& consts) {
  switch (e.kind()) {
    case ExprKind::Int:
    case ExprKind::Rat:
    case ExprKind::Float: {
      const double v = e.float_value();
      return [v](double) { return v; };
    }
    case ExprKind::Pi: return [](double) { return std::numbers::pi; };
    case ExprKind::Imag: throw DomainError("imaginary unit in a real function");
    case ExprKind::Param:
    case ExprKind::Var: {
      if (e.name() == var) return [](double x) { return x; };
      auto it = consts.find(e.name());
      if (it == consts.end()) throw UnboundSymbol(e.name());
      const double v = it->second;
      return [v](double) { return v; };
    }
    case ExprKind::Sum:
    case ExprKind::Prod: {
      std::vector<RealFn> parts;
      for (const Expr& c : e.children()) parts.push_back(compile_real(c, var, consts));
      if (e.kind() == ExprKind::Sum) {
        return [parts](double x) {
          double s = 0.0;
          for (const RealFn& f : parts) s += f(x);
          return s;
        };
      }
      return [parts](double x) {
        double p = 1.0;
        for (const RealFn& f : parts) p *= f(x);
        return p;
      };
    }
    case ExprKind::Pow: {
      RealFn base = compile_real(e.base(), var, consts);
      const Rational r = e.exponent();
      if (r.is_integer()) {
        const int n = static_cast<int>(r.num());
        return [base, n](double x) {
          const double b = base(x);
          if (b == 0.0 && n < 0) throw DomainError("zero raised to a negative power");
          return std::pow(b, n);
        };
      }
      const double d = r.to_double();
      return [base, d](double x) { return std::pow(base(x), d); };
    }
    case ExprKind::Func: {
      RealFn u = compile_real(e.arg(), var, consts);
      switch (e.func_kind()) {
        case FuncKind::Sin: return [u](double x) { return std::sin(u(x)); };
        case FuncKind::Cos: return [u](double x) { return std::cos(u(x)); };
        case FuncKind::Atan: return [u](double x) { return std::atan(u(x)); };
        case FuncKind::Exp: return [u](double x) { return std::exp(u(x)); };
      }
    }
  }
  throw DomainError("unsupported node");
}

// ---- rebuilding utilities -------------------------------------------------------------

namespace {

template <typename Leaf>
Expr rebuild(const Expr& e, const Leaf& leaf) {
  switch (e.kind()) {
    case ExprKind::Sum:
    case ExprKind::Prod: {
      std::vector<Expr> kids;
      for (const Expr& c : e.children()) kids.push_back(rebuild(c, leaf));
      return e.kind() == ExprKind::Sum ? Expr::sum(std::move(kids)) : Expr::product(std::move(kids));
    }
    case ExprKind::Pow: return Expr::power(rebuild(e.base(), leaf), e.exponent());
    case ExprKind::Func: return Expr::func(e.func_kind(), rebuild(e.arg(), leaf));
    default: return leaf(e);
  }
}

}  // namespace

Expr simplify_basic(const Expr& e) {
  return rebuild(e, [](const Expr& x) { return x; });
}

Expr substitute(const Expr& e, std::string_view name, const Expr& with) {
  return rebuild(e, [&](const Expr& x) {
    if ((x.kind() == ExprKind::Param || x.kind() == ExprKind::Var) && x.name() == name) return with;
    return x;
  });
}

Expr round_floats(const Expr& e, int sig) {
  return rebuild(e, [&](const Expr& x) {
    if (x.kind() == ExprKind::Float) return Expr::real(round_sig(x.float_value(), sig));
    return x;
  });
}

double round_sig(double v, int sig) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, sig - 1);
  double out = v;
  std::from_chars(buf, res.ptr, out);
  return out;
}

std::string format_double(double v) {
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  if (res.ec != std::errc()) {
    res = std::to_chars(buf, buf + sizeof buf, v);
  }
  return std::string(buf, res.ptr);
}

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  auto walk = [&](auto&& self, const Expr& x) -> void {
    if (x.kind() == ExprKind::Param || x.kind() == ExprKind::Var) out.insert(x.name());
    for (const Expr& c : x.children()) self(self, c);
  };
  if (e.kind() == ExprKind::Sum || e.kind() == ExprKind::Prod || e.kind() == ExprKind::Pow ||
      e.kind() == ExprKind::Func || e.kind() == ExprKind::Param || e.kind() == ExprKind::Var) {
    walk(walk, e);
  }
  return out;
}

bool depends_on(const Expr& e, std::string_view name) {
  if (e.kind() == ExprKind::Param || e.kind() == ExprKind::Var) return e.name() == name;
  switch (e.kind()) {
    case ExprKind::Sum:
    case ExprKind::Prod:
    case ExprKind::Pow:
    case ExprKind::Func:
      for (const Expr& c : e.children()) {
        if (depends_on(c, name)) return true;
      }
      return false;
    default: return false;
  }
}

bool is_positive(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Int:
    case ExprKind::Rat:
    case ExprKind::Float: return e.float_value() > 0;
    case ExprKind::Pi:
    case ExprKind::Param: return true;
    case ExprKind::Pow: return is_positive(e.base());
    case ExprKind::Prod:
      return std::all_of(e.children().begin(), e.children().end(), [](const Expr& c) { return is_positive(c); });
    case ExprKind::Func: return e.func_kind() == FuncKind::Exp && free_symbols(e).empty();
    default: return false;
  }
}

std::optional<Rational> monomial_degree(const Expr& term, std::string_view var) {
  if (!depends_on(term, var)) return Rational(0);
  auto single = [&](const Expr& f) -> std::optional<Rational> {
    if (f.kind() == ExprKind::Var || f.kind() == ExprKind::Param) return Rational(1);
    if (f.kind() == ExprKind::Pow && (f.base().kind() == ExprKind::Var || f.base().kind() == ExprKind::Param) &&
        f.base().name() == var) {
      return f.exponent();
    }
    return std::nullopt;
  };
  if (term.kind() != ExprKind::Prod) return single(term);
  std::optional<Rational> deg;
  for (const Expr& f : term.children()) {
    if (!depends_on(f, var)) continue;
    if (deg) return std::nullopt;
    deg = single(f);
    if (!deg) return std::nullopt;
  }
  return deg;
}

Expr coefficient(const Expr& poly, std::string_view var, const Rational& degree) {
  std::vector<Expr> terms;
  auto consider = [&](const Expr& t) {
    auto d = monomial_degree(t, var);
    if (d && *d == degree) terms.push_back(t);
  };
  if (poly.kind() == ExprKind::Sum) {
    for (const Expr& t : poly.children()) consider(t);
  } else {
    consider(poly);
  }
  Expr s = Expr::sum(std::move(terms));
  return Expr::product({s, Expr::power(Expr::symbol(var), -degree)});
}

}  // namespace asymgen
