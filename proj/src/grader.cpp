#include "asymgen/grader.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <regex>

#include "asymgen/problems.hpp"
#include "asymgen/rng.hpp"

namespace asymgen {

namespace {

constexpr std::uint64_t kSampleSeed = 0x9a7ade;

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) s.replace(pos, from.size(), to);
  return s;
}

// Unicode forms that show up in hand-typed answers.
std::string normalize(std::string s) {
  s = replace_all(std::move(s), "−", "-");
  s = replace_all(std::move(s), "ε", "\\epsilon ");
  s = replace_all(std::move(s), "·", " \\cdot ");
  return s;
}

std::string trim(std::string s) {
  auto junk = [](const std::string& t, std::size_t i) {
    return std::isspace(static_cast<unsigned char>(t[i])) || (t[i] == '\\' && i + 1 < t.size() && t[i + 1] == ' ');
  };
  while (!s.empty()) {
    if (std::isspace(static_cast<unsigned char>(s.front()))) s.erase(0, 1);
    else if (s.size() > 1 && junk(s, 0)) s.erase(0, 2);
    else break;
  }
  while (!s.empty() && (std::isspace(static_cast<unsigned char>(s.back())) || s.back() == '.')) {
    if (s.size() > 1 && s[s.size() - 2] == '\\' && s.back() == ' ') s.resize(s.size() - 2);
    else s.pop_back();
  }
  if (s.size() > 1 && s[s.size() - 2] == '\\' && s.back() == ' ') s.resize(s.size() - 2);
  return s;
}

bool opens(char c) { return c == '{' || c == '(' || c == '['; }
bool closes(char c) { return c == '}' || c == ')' || c == ']'; }

// Positions of `needle` at bracket depth zero.
std::vector<std::size_t> top_level(const std::string& s, const std::string& needle) {
  std::vector<std::size_t> out;
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size() && (opens(s[i + 1]) || closes(s[i + 1]))) {
      ++i;  // escaped brace
      continue;
    }
    if (depth == 0 && s.compare(i, needle.size(), needle) == 0) out.push_back(i);
    if (opens(s[i])) ++depth;
    if (closes(s[i])) --depth;
  }
  return out;
}

// Drops a left-hand side such as "y(x)=" or "\delta \approx".
std::string strip_lhs(std::string s) {
  std::size_t cut = 0;
  for (const char* rel : {"=", "\\approx"}) {
    for (std::size_t p : top_level(s, rel)) cut = std::max(cut, p + std::string(rel).size());
  }
  return trim(s.substr(cut));
}

std::string strip_text_macros(std::string s) {
  static const std::regex text(R"(\\text\{[^{}]*\})");
  return std::regex_replace(s, text, " ");
}

// Contents of "[...]" or "\left[...\right]" when the whole string is one.
std::optional<std::string> unwrap_list(const std::string& s) {
  std::string t = trim(s);
  std::size_t open = 0;
  if (t.rfind("\\left[", 0) == 0) open = 6;
  else if (t.rfind("[", 0) == 0) open = 1;
  else return std::nullopt;
  std::size_t close = t.size();
  if (t.size() >= 7 && t.compare(t.size() - 7, 7, "\\right]") == 0) close = t.size() - 7;
  else if (t.back() == ']') close = t.size() - 1;
  else return std::nullopt;
  if (close < open) return std::nullopt;
  return t.substr(open, close - open);
}

std::vector<std::string> split_items(const std::string& group) {
  std::string body = trim(strip_text_macros(group));
  if (auto list = unwrap_list(strip_lhs(body))) body = *list;
  std::vector<std::size_t> cuts;
  for (const char* sep : {",", "\\;", "\\quad"}) {
    for (std::size_t p : top_level(body, sep)) cuts.push_back(p);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::string> out;
  std::size_t start = 0;
  auto push = [&](std::size_t end) {
    std::string item = body.substr(start, end - start);
    if (auto list = unwrap_list(strip_lhs(item))) item = *list;
    item = strip_lhs(trim(item));
    if (!item.empty()) out.push_back(item);
  };
  for (std::size_t c : cuts) {
    push(c);
    start = c + (body.compare(c, 6, "\\quad") == 0 ? 5 : body[c] == ',' ? 1 : 2);
  }
  push(body.size());
  return out;
}

std::string regime_hint_before(const std::string& text, std::size_t pos) {
  std::string lower = text.substr(0, pos);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  const std::size_t s = lower.rfind("small");
  const std::size_t l = lower.rfind("large");
  if (s == std::string::npos && l == std::string::npos) return "";
  if (l == std::string::npos || (s != std::string::npos && s > l)) return "small";
  return "large";
}

struct Span {
  std::size_t start;
  std::string text;
};

std::vector<Span> boxed_with_positions(const std::string& text) {
  std::vector<Span> out;
  const std::string tag = "\\boxed{";
  std::size_t pos = 0;
  while ((pos = text.find(tag, pos)) != std::string::npos) {
    std::size_t i = pos + tag.size();
    int depth = 1;
    const std::size_t begin = i;
    for (; i < text.size() && depth > 0; ++i) {
      if (text[i] == '\\' && i + 1 < text.size() && (text[i + 1] == '{' || text[i + 1] == '}')) {
        ++i;
        continue;
      }
      if (text[i] == '{') ++depth;
      if (text[i] == '}') --depth;
    }
    if (depth != 0) break;
    out.push_back({pos, text.substr(begin, i - 1 - begin)});
    pos = i;
  }
  return out;
}

std::optional<Span> last_bracketed_list(const std::string& text) {
  const std::size_t close = text.rfind(']');
  if (close == std::string::npos) return std::nullopt;
  int depth = 0;
  for (std::size_t i = close + 1; i-- > 0;) {
    if (text[i] == ']') ++depth;
    if (text[i] == '[') --depth;
    if (depth == 0) {
      std::size_t start = i;
      if (start >= 5 && text.compare(start - 5, 5, "\\left") == 0) start -= 5;
      return Span{start, text.substr(start, close + 1 - start)};
    }
  }
  return std::nullopt;
}

std::vector<Complex> values_at(const std::vector<Expr>& exprs, double eps) {
  std::vector<Complex> out;
  for (const Expr& e : exprs) {
    try {
      out.push_back(eval(e, {{"epsilon", eps}}));
    } catch (const Error&) {
      out.push_back(Complex(NAN, NAN));
    }
  }
  return out;
}

std::vector<Expr> answers_for(const ProblemRecord& r, const std::string& regime) {
  std::vector<Expr> out;
  for (const BoxedAnswer& a : r.boxed_answers) {
    if (a.regime == regime) out.push_back(a.expr);
  }
  return out;
}

std::vector<std::string> regimes_of(const ProblemRecord& r) {
  std::vector<std::string> out;
  for (const BoxedAnswer& a : r.boxed_answers) {
    if (std::find(out.begin(), out.end(), a.regime) == out.end()) out.push_back(a.regime);
  }
  return out;
}

std::string hint_of(const std::string& regime) {
  if (regime.rfind("small", 0) == 0) return "small";
  if (regime.rfind("large", 0) == 0) return "large";
  return "";
}

// Candidates for a regime: the last group hinted with it, else the last
// unhinted group.
std::vector<Expr> last_group_for(const std::vector<AnswerGroup>& groups, const std::string& hint) {
  for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
    if (it->regime_hint == hint) return it->exprs;
  }
  for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
    if (it->regime_hint.empty()) return it->exprs;
  }
  return {};
}

std::vector<Expr> all_exprs(const std::vector<AnswerGroup>& groups) {
  std::vector<Expr> out;
  for (const AnswerGroup& g : groups) out.insert(out.end(), g.exprs.begin(), g.exprs.end());
  return out;
}

// x* of a power law a (x - x*)^p or b (x* - x)^p: the constant summed with x.
std::optional<double> blowup_point(const Expr& e) {
  if (e.kind() == ExprKind::Sum) {
    std::optional<double> c;
    std::optional<double> slope;
    for (const Expr& t : e.children()) {
      if (t.is_number()) c = t.float_value();
      else if (t.kind() == ExprKind::Var && t.name() == "x") slope = 1.0;
      else if (t.kind() == ExprKind::Prod && t.children().size() == 2 && t.children()[0].is_number() &&
               t.children()[1].kind() == ExprKind::Var && t.children()[1].name() == "x") {
        slope = t.children()[0].float_value();
      }
    }
    if (c && slope && e.children().size() == 2) return -*c / *slope;
  }
  for (const Expr& child : e.children()) {
    if (auto x = blowup_point(child)) return x;
  }
  return std::nullopt;
}

double real_value(const Expr& e, double x) {
  try {
    const Complex v = eval(e, {{"x", x}}, Branch::RealOddRoot);
    return std::abs(v.imag()) <= 1e-9 * std::max(1.0, std::abs(v.real())) ? v.real() : NAN;
  } catch (const Error&) {
    return NAN;
  }
}

std::optional<double> declared_t0(const std::string& text) {
  static const std::regex re(R"(t_\{?0\}?\s*(?:=|\\approx)\s*\\?(?:left)?\[?\s*(-?\d+(?:\.\d+)?))");
  std::smatch m;
  std::optional<double> out;
  auto begin = text.cbegin();
  while (std::regex_search(begin, text.cend(), m, re)) {
    out = std::stod(m[1].str());
    begin = m.suffix().first;
  }
  return out;
}

// Sampling windows at the regime edges.
Domain epsilon_domain(const std::string& regime) {
  if (regime == "small_eps") return Domain().decades("epsilon", 1e-3, 1e-1);
  return Domain().decades("epsilon", 1e1, 1e3);
}

// Regime answers of polynomial integrals are c eps^k; sampled around eps = 1.
Domain power_law_domain(const std::string&) { return Domain().decades("epsilon", 1e-2, 1e2); }

// ---- rubrics ---------------------------------------------------------------------

void score_roots(const ProblemRecord& r, const std::vector<AnswerGroup>& groups, ScoreReport& s) {
  PolyProbes probes;
  if (r.params.contains("probes")) {
    probes.small_eps = r.params.at("probes").at("small_eps").get<double>();
    probes.large_eps = r.params.at("probes").at("large_eps").get<double>();
  }
  for (const std::string& regime : regimes_of(r)) {
    const double eps = regime == "small_eps" ? probes.small_eps : probes.large_eps;
    const std::vector<Complex> truth = values_at(answers_for(r, regime), eps);
    const std::vector<Expr> response = last_group_for(groups, hint_of(regime));
    if (response.empty()) s.notes.push_back("missing_regime:" + regime);
    const std::vector<int> match = greedy_match(truth, values_at(response, eps), 0.10);
    const long hits = std::count_if(match.begin(), match.end(), [](int m) { return m >= 0; });
    if (hits < static_cast<long>(truth.size()) && !response.empty()) s.notes.push_back("missing_roots:" + regime);
    s.per_regime[regime] = truth.empty() ? 0.0 : double(hits) / double(truth.size());
  }
}

void score_corrections(const ProblemRecord& r, const std::vector<AnswerGroup>& groups, ScoreReport& s) {
  bool any_delta = false;
  for (const AnswerGroup& g : groups) any_delta = any_delta || g.text.find("\\delta") != std::string::npos;
  for (const std::string& regime : regimes_of(r)) {
    std::vector<Expr> pool;
    for (const AnswerGroup& g : groups) {
      if (any_delta && g.text.find("\\delta") == std::string::npos) continue;
      if (!g.regime_hint.empty() && g.regime_hint != hint_of(regime)) continue;
      pool.insert(pool.end(), g.exprs.begin(), g.exprs.end());
    }
    const std::vector<Expr> truth = answers_for(r, regime);
    std::vector<bool> used(pool.size(), false);
    long hits = 0;
    for (const Expr& t : truth) {
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!used[i] && equivalent(pool[i], t, epsilon_domain(regime))) {
          used[i] = true;
          ++hits;
          break;
        }
      }
    }
    if (hits < static_cast<long>(truth.size())) s.notes.push_back("wrong_correction:" + regime);
    s.per_regime[regime] = truth.empty() ? 0.0 : double(hits) / double(truth.size());
  }
}

void score_ode(const ProblemRecord& r, const std::vector<AnswerGroup>& groups, ScoreReport& s) {
  const std::vector<Expr> items = all_exprs(groups);
  const std::vector<Expr> small = answers_for(r, "small_x");
  const std::vector<Expr> large = answers_for(r, "large_x");

  double small_score = 0.0;
  if (!small.empty()) {
    Domain d;
    d.uniform("x", 0.0, 0.1);
    for (const Expr& e : items) {
      if (equivalent(e, small[0], d)) small_score = 1.0;
    }
  }
  if (small_score == 0.0) s.notes.push_back("wrong_taylor");
  s.per_regime["small_x"] = small_score;

  double large_score = 0.0;
  const std::optional<double> xs = large.empty() ? std::nullopt : blowup_point(large[0]);
  if (xs) {
    Domain d;
    d.uniform("x", std::max(0.0, *xs - 0.5), std::max(0.0, *xs - 0.05));
    d.branch = Branch::RealOddRoot;
    for (const Expr& e : items) {
      if (equivalent(e, large[0], d)) {
        large_score = 1.0;
        break;
      }
      bool close = true;
      for (double off : {0.2, 0.15, 0.1}) {
        const double x = std::max(0.0, *xs - off);
        const double key = real_value(large[0], x);
        const double got = real_value(e, x);
        const double err = std::abs(got - key) / std::max(1.0, std::abs(key));
        close = close && std::isfinite(err) && err <= 0.20;
      }
      if (close) large_score = std::max(large_score, 0.5);
    }
  }
  if (large_score < 1.0) s.notes.push_back(large_score > 0 ? "approximate_blowup" : "wrong_blowup");
  s.per_regime["large_x"] = large_score;
}

void score_each_regime(const ProblemRecord& r, const std::vector<AnswerGroup>& groups, ScoreReport& s,
                       const std::function<Domain(const std::string&)>& domain_for) {
  const std::vector<Expr> items = all_exprs(groups);
  for (const std::string& regime : regimes_of(r)) {
    const Expr key = answers_for(r, regime).front();
    double score = 0.0;
    for (const Expr& e : items) {
      if (equivalent(e, key, domain_for(regime))) score = 1.0;
    }
    if (score == 0.0) s.notes.push_back("wrong_answer:" + regime);
    s.per_regime[regime] = score;
  }
}

void score_nondim_numeric(const ProblemRecord& r, const std::vector<AnswerGroup>& groups, ScoreReport& s) {
  const Expr key = r.boxed_answers.front().expr;
  const double decimal = key.float_value();
  double exact = decimal;
  try {
    const Draft d = solve_params(PType::NondimNumeric, r.params);
    exact = *std::get<NondimNumericDraft>(d).result.epsilon_value;
  } catch (const Error&) {
    s.notes.push_back("unsolvable_key");
  }
  double score = 0.0;
  const std::vector<Expr> items = all_exprs(groups);
  if (!items.empty()) {
    // The final answer; any value at least as close to the exact epsilon as
    // the two-decimal key counts.
    try {
      const Complex v = eval(items.back(), {});
      const double slack = std::max(std::abs(decimal - exact), 1e-6 * std::max(1.0, std::abs(exact)));
      if (std::abs(v.imag()) < 1e-12 && std::abs(v.real() - exact) <= slack + 1e-12) score = 1.0;
    } catch (const Error&) {
      s.notes.push_back("non_numeric");
    }
  }
  if (score == 0.0) s.notes.push_back("wrong_answer:epsilon");
  s.per_regime["epsilon"] = score;
}

void score_laplace(const ProblemRecord& r, const std::vector<AnswerGroup>& groups, const std::string& raw,
                   ScoreReport& s) {
  std::optional<LaplaceDraft> draft;
  try {
    draft = std::get<LaplaceDraft>(solve_params(PType::IntegralLaplace, r.params));
  } catch (const Error&) {
    s.notes.push_back("unsolvable_key");
  }
  // Both sides are compared with the key's exponential factor divided out.
  const Expr x = Expr::var("x");
  const Expr unscale = draft ? exp(Expr::real(-draft->approx.rate) * x) : Expr::integer(1);
  const Expr key = r.boxed_answers.front().expr * unscale;
  const double hi = draft ? std::clamp(600.0 / std::max(std::abs(draft->approx.rate), 1e-9), 12.0, 60.0) : 60.0;
  const Domain d = Domain().uniform("x", hi / 6.0, hi);
  double score = 0.0;
  for (const Expr& e : all_exprs(groups)) {
    if (equivalent(e * unscale, key, d)) score = 1.0;
  }
  if (score == 0.0) {
    const std::optional<double> t0 = declared_t0(raw);
    if (t0 && draft && std::abs(*t0 - draft->critical.t0) <= 1e-2) score = 0.5;
    s.notes.push_back(score > 0 ? "wrong_final_form" : "wrong_t0");
  }
  s.per_regime["large_x"] = score;
}

}  // namespace

Domain& Domain::uniform(const std::string& name, double lo, double hi) {
  ranges[name] = {lo, hi};
  log_scale[name] = false;
  return *this;
}

Domain& Domain::decades(const std::string& name, double lo, double hi) {
  ranges[name] = {lo, hi};
  log_scale[name] = true;
  return *this;
}

bool equivalent(const Expr& e1, const Expr& e2, const Domain& domain, double tol) {
  if (e1 == e2) return true;
  for (const std::set<std::string>& syms : {free_symbols(e1), free_symbols(e2)}) {
    for (const std::string& n : syms) {
      if (!domain.ranges.count(n)) return false;
    }
  }
  Rng rng(kSampleSeed);
  int valid = 0;
  for (int i = 0; i < 20; ++i) {
    Bindings b;
    for (const auto& [name, range] : domain.ranges) {
      const double u = rng.uniform();
      const bool log = domain.log_scale.at(name);
      b[name] = log ? std::exp(std::log(range.first) + u * (std::log(range.second) - std::log(range.first)))
                    : range.first + u * (range.second - range.first);
    }
    Complex v1, v2;
    try {
      v1 = eval(e1, b, domain.branch);
      v2 = eval(e2, b, domain.branch);
    } catch (const Error&) {
      return false;
    }
    const bool f1 = std::isfinite(v1.real()) && std::isfinite(v1.imag());
    const bool f2 = std::isfinite(v2.real()) && std::isfinite(v2.imag());
    if (!f1 && !f2) continue;
    if (f1 != f2) return false;
    if (std::abs(v1 - v2) / std::max(1.0, std::abs(v2)) > tol) return false;
    ++valid;
  }
  return valid >= 10;
}

std::vector<AnswerGroup> extract_answer_groups(const std::string& raw_text, std::vector<std::string>* notes) {
  const std::string text = normalize(raw_text);
  std::vector<Span> spans = boxed_with_positions(text);
  if (spans.empty()) {
    if (notes) notes->push_back("unboxed_answer");
    if (auto list = last_bracketed_list(text)) spans.push_back(*list);
  }
  std::vector<AnswerGroup> out;
  for (const Span& sp : spans) {
    AnswerGroup g;
    g.text = sp.text;
    g.regime_hint = regime_hint_before(text, sp.start);
    g.items = split_items(sp.text);
    for (const std::string& item : g.items) {
      try {
        g.exprs.push_back(parse(item, Dialect::LatexLite));
      } catch (const Error&) {
        if (notes) notes->push_back("unparseable:" + item);
      }
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<Expr> extract_boxed(const std::string& raw_text, std::vector<std::string>* notes) {
  std::vector<Expr> out;
  const std::string text = normalize(raw_text);
  const std::vector<Span> spans = boxed_with_positions(text);
  if (spans.empty() && notes) notes->push_back("unboxed_answer");
  for (const Span& sp : spans) {
    for (const std::string& item : split_items(sp.text)) {
      try {
        out.push_back(parse(item, Dialect::LatexLite));
      } catch (const Error&) {
        if (notes) notes->push_back("unparseable:" + item);
      }
    }
  }
  return out;
}

ScoreReport score_response(const ProblemRecord& problem, const ResponseRecord& response) {
  ScoreReport s;
  s.problem_id = problem.id;
  const std::vector<AnswerGroup> groups = extract_answer_groups(response.raw_text, &s.notes);
  switch (problem.ptype) {
    case PType::NondimSymbolic:
      score_each_regime(problem, groups, s, [](const std::string&) {
        Domain d;
        d.uniform("a1", 0.5, 5.0).uniform("a2", 0.5, 5.0).uniform("a3", 0.5, 5.0);
        return d;
      });
      break;
    case PType::NondimNumeric: score_nondim_numeric(problem, groups, s); break;
    case PType::Roots: score_roots(problem, groups, s); break;
    case PType::RootsCorrection: score_corrections(problem, groups, s); break;
    case PType::Ode: score_ode(problem, groups, s); break;
    case PType::IntegralPoly: score_each_regime(problem, groups, s, power_law_domain); break;
    case PType::IntegralLaplace: score_laplace(problem, groups, response.raw_text, s); break;
  }
  double sum = 0.0;
  for (const auto& [regime, score] : s.per_regime) sum += score;
  s.final = s.per_regime.empty() ? 0.0 : sum / double(s.per_regime.size());
  return s;
}

ScoreReport score_response(const std::vector<ProblemRecord>& problems, const ResponseRecord& response) {
  for (const ProblemRecord& p : problems) {
    if (p.id == response.problem_id) return score_response(p, response);
  }
  throw UnknownProblemId(response.problem_id);
}

std::vector<ResponseRecord> read_responses(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<ResponseRecord> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(text);
      ResponseRecord r{j.at("problem_id").get<std::string>(), j.at("raw_text").get<std::string>()};
      if (r.problem_id.empty()) throw SchemaError("empty problem_id", line);
      out.push_back(std::move(r));
    } catch (const Json::exception& e) {
      throw SchemaError(e.what(), line);
    }
  }
  return out;
}

Json score_json(const ScoreReport& s) {
  return {{"problem_id", s.problem_id}, {"per_regime", s.per_regime}, {"final", s.final}, {"notes", s.notes}};
}

}  // namespace asymgen
