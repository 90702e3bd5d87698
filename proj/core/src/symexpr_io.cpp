// Emission (latex/text/json) and parsing (text/json) of SymExpr.

#include <cctype>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "entcum/errors.hpp"
#include "entcum/symexpr.hpp"

namespace entcum {

namespace {

using Style = Polynomial::Style;

std::string base_latex(PsiBase b) {
  switch (b) {
    case PsiBase::MPlusAlpha: return "m+\\alpha";
    case PsiBase::Alpha: return "\\alpha";
    case PsiBase::MN: return "mn";
    case PsiBase::N: return "n";
    case PsiBase::NMinusM: return "n-m";
  }
  return "?";
}

std::string offset_suffix(std::int32_t off) {
  if (off == 0) return "";
  return (off > 0 ? "+" : "") + std::to_string(off);
}

std::string psi_str(const PsiFactor& f, Style style) {
  std::string s;
  if (style == Style::Latex) {
    const std::string k = std::to_string(f.order);
    s = "\\psi_" + (k.size() == 1 ? k : "{" + k + "}");
    if (f.power > 1) s += "^{" + std::to_string(f.power) + "}";
    s += "(" + base_latex(f.base) + offset_suffix(f.offset) + ")";
  } else {
    s = "psi_" + std::to_string(f.order) + "(" + std::string(base_name(f.base)) + offset_suffix(f.offset) + ")";
    if (f.power > 1) s += "^" + std::to_string(f.power);
  }
  return s;
}

bool single_token(const Polynomial& p) {
  return p.size() == 1 && (p.is_constant() || p.leading_term().coeff == 1);
}

std::string wrap(const std::string& s, Style style) {
  return style == Style::Latex ? "\\left(" + s + "\\right)" : "(" + s + ")";
}

std::string denominator_str(const RationalFunction& c, Style style) {
  const Rational content = c.raw_numerator().content();
  std::vector<std::string> parts;
  if (content.get_den() != 1) parts.push_back(content.get_den().get_str());
  for (const auto& f : c.denominator_factors()) {
    std::string s = f.poly.to_string(style);
    if (f.poly.size() > 1) s = wrap(s, style);
    if (f.mult > 1) s += style == Style::Latex ? "^{" + std::to_string(f.mult) + "}" : "^" + std::to_string(f.mult);
    parts.push_back(std::move(s));
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i != 0 && style == Style::Text) out += "*";
    out += parts[i];
  }
  return out;
}

// Emits one term without its leading sign; returns true if negative.
bool term_str(const FactorList& fs, RationalFunction c, Style style, std::string& out) {
  const bool neg = c.raw_numerator().leading_term().coeff < 0;
  if (neg) c = -c;
  std::string psis;
  for (const auto& f : fs) {
    if (!psis.empty() && style == Style::Text) psis += "*";
    psis += psi_str(f, style);
  }
  const Polynomial num = c.numerator();
  const std::string sep = style == Style::Text ? "*" : "";
  if (c.is_polynomial() && c.raw_numerator().content().get_den() == 1) {
    if (num.is_constant() && num.constant_value() == 1 && !psis.empty()) {
      out = psis;
    } else {
      out = single_token(num) || psis.empty() ? num.to_string(style) : wrap(num.to_string(style), style);
      if (!psis.empty()) out += sep + psis;
    }
    return neg;
  }
  const std::string den = denominator_str(c, style);
  if (style == Style::Latex) {
    out = "\\frac{" + num.to_string(style) + "}{" + den + "}" + psis;
  } else {
    const bool den_single = den.find_first_of("*+- ^") == std::string::npos;
    out = (num.size() == 1 ? num.to_string(style) : wrap(num.to_string(style), style)) + "/" +
          (den_single ? den : "(" + den + ")");
    if (!psis.empty()) out += "*" + psis;
  }
  return neg;
}

std::string emit_sum(const SymExpr& e, Style style) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [fs, c] : ordered_terms(e)) {
    std::string body;
    const bool neg = term_str(fs, c, style, body);
    if (first) {
      out += neg ? "-" + body : body;
    } else {
      out += (neg ? " - " : " + ") + body;
    }
    first = false;
  }
  return out;
}

nlohmann::json poly_json(const Polynomial& p) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& t : p.terms()) a.push_back({t.coeff.get_str(), {t.mono.exp[0], t.mono.exp[1]}});
  return a;
}

Polynomial poly_from_json(const nlohmann::json& j, VarContext ctx) {
  if (!j.is_array()) throw ParseError("polynomial must be a JSON array");
  std::vector<Polynomial::Term> ts;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2 || !t[1].is_array() || t[1].size() != kNumVars) {
      throw ParseError("malformed polynomial term");
    }
    Monomial mono;
    for (std::size_t v = 0; v < kNumVars; ++v) mono.exp[v] = t[1][v].get<std::uint32_t>();
    ts.push_back({mono, parse_rational(t[0].get<std::string>())});
  }
  return Polynomial::from_terms(ctx, std::move(ts));
}

}  // namespace

std::string to_latex(const SymExpr& e) { return emit_sum(e, Style::Latex); }
std::string to_text(const SymExpr& e) { return emit_sum(e, Style::Text); }

std::string to_json(const SymExpr& e) {
  nlohmann::json j;
  j["schema"] = 1;
  const auto names = variable_names(e.context());
  j["context"] = {std::string(names[0]), std::string(names[1])};
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [fs, c] : ordered_terms(e)) {
    nlohmann::json t;
    t["coeff"]["num"] = poly_json(c.numerator());
    t["coeff"]["den"] = poly_json(c.denominator());
    nlohmann::json dfs = nlohmann::json::array();
    for (const auto& f : c.denominator_factors()) dfs.push_back({{"poly", poly_json(f.poly)}, {"mult", f.mult}});
    t["coeff"]["den_factors"] = dfs;
    nlohmann::json ps = nlohmann::json::array();
    for (const auto& f : fs) {
      nlohmann::json p = {{"k", f.order}, {"base", std::string(base_name(f.base))}, {"pow", f.power}};
      if (f.offset != 0) p["offset"] = f.offset;
      ps.push_back(p);
    }
    t["psis"] = ps;
    terms.push_back(t);
  }
  j["terms"] = terms;
  return j.dump();
}

SymExpr from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("invalid JSON: ") + ex.what());
  }
  try {
    if (j.value("schema", 0) != 1) throw ParseError("unsupported expression schema");
    const auto ctxv = j.at("context").get<std::vector<std::string>>();
    VarContext ctx;
    if (ctxv == std::vector<std::string>{"m", "alpha"}) {
      ctx = VarContext::MAlpha;
    } else if (ctxv == std::vector<std::string>{"m", "n"}) {
      ctx = VarContext::MN;
    } else {
      throw ParseError("unknown variable context");
    }
    SymExpr e(ctx);
    for (const auto& t : j.at("terms")) {
      const auto& cj = t.at("coeff");
      const Polynomial num = poly_from_json(cj.at("num"), ctx);
      RationalFunction coeff(ctx);
      if (cj.contains("den_factors")) {
        std::vector<RationalFunction::Factor> fs;
        for (const auto& f : cj["den_factors"]) fs.push_back({poly_from_json(f.at("poly"), ctx), f.at("mult").get<unsigned>()});
        // num/den is canonical, so the integer part of den is recovered as
        // den divided by the product of its factors
        Polynomial prod = Polynomial::constant(ctx, 1);
        for (const auto& f : fs) prod = prod * f.poly.pow(f.mult);
        const Polynomial den = poly_from_json(cj.at("den"), ctx);
        auto scale = den.divide_exact(prod);
        if (!scale || !scale->is_constant()) throw ParseError("den_factors inconsistent with den");
        coeff = RationalFunction::from_factors(num * Rational(1 / scale->constant_value()), std::move(fs));
      } else {
        coeff = RationalFunction::fraction(num, poly_from_json(cj.at("den"), ctx));
      }
      FactorList fl;
      for (const auto& p : t.at("psis")) {
        auto b = base_from_name(p.at("base").get<std::string>());
        if (!b) throw ParseError("unknown polygamma base");
        fl.push_back(PsiFactor{p.at("k").get<std::uint32_t>(), *b, p.value("offset", 0), p.at("pow").get<std::uint32_t>()});
      }
      e += SymExpr::term(coeff, fl);
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed expression JSON: ") + ex.what());
  }
}

std::string emit(const SymExpr& e, Format fmt) {
  switch (fmt) {
    case Format::Latex: return to_latex(e);
    case Format::Json: return to_json(e);
    case Format::Text: return to_text(e);
  }
  return {};
}

// ---------------------------------------------------------------- parser

namespace {

enum class Tok { Num, Var, Name, Psi, Op, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // number digits, name, operator char
  std::uint32_t psi_order = 0;
  std::size_t var = 0;
};

// A parsed value. Pure rational products keep their polynomial factors
// apart so that dividing by "(mn+1)(mn+2)" yields two denominator factors.
struct Value {
  SymExpr expr;
  bool factored = false;
  Rational scalar = 1;
  std::vector<std::pair<Polynomial, int>> facs;

  static Value from_poly(const Polynomial& p) {
    Value v;
    v.expr = SymExpr(p);
    v.factored = true;
    if (p.is_constant()) {
      v.scalar = p.constant_value();
    } else {
      v.facs.push_back({p, 1});
    }
    return v;
  }
  static Value from_expr(SymExpr e) {
    Value v;
    v.expr = std::move(e);
    return v;
  }
  bool is_pure() const { return factored || expr.is_rational(); }
};

class Parser {
 public:
  Parser(VarContext ctx, const std::map<std::string, Value>& defs) : ctx_(ctx), defs_(defs) {}

  Value parse(std::string_view src) {
    tokenize(src);
    pos_ = 0;
    Value v = expr();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("expression parse error: " + msg); }

  void tokenize(std::string_view s) {
    toks_.clear();
    const auto names = variable_names(ctx_);
    std::size_t i = 0;
    while (i < s.size()) {
      const char ch = s[i];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        ++i;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        toks_.push_back({Tok::Num, std::string(s.substr(i, j - i))});
        i = j;
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(ch))) {
        std::size_t j = i;
        while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
        std::size_t k = j;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        const std::string letters(s.substr(i, j - i));
        const std::string full(s.substr(i, k - i));
        if (letters == "psi") {
          if (j >= s.size() || s[j] != '_') fail("psi needs an order: psi_k(...)");
          std::size_t e = j + 1;
          while (e < s.size() && std::isdigit(static_cast<unsigned char>(s[e]))) ++e;
          if (e == j + 1) fail("psi needs an order: psi_k(...)");
          Token t{Tok::Psi, "psi"};
          t.psi_order = static_cast<std::uint32_t>(std::stoul(std::string(s.substr(j + 1, e - j - 1))));
          toks_.push_back(t);
          i = e;
          continue;
        }
        if (defs_.count(full) != 0) {
          toks_.push_back({Tok::Name, full});
          i = k;
          continue;
        }
        if (letters == "alpha") {
          if (ctx_ != VarContext::MAlpha) fail("alpha outside {m,alpha} context");
          Token t{Tok::Var, "alpha"};
          t.var = kVarSecond;
          toks_.push_back(t);
          i = j;
          continue;
        }
        // run of single-letter variables, e.g. "mn"
        for (char c : letters) {
          std::size_t v = kNumVars;
          for (std::size_t q = 0; q < kNumVars; ++q) {
            if (names[q].size() == 1 && names[q][0] == c) v = q;
          }
          if (v == kNumVars) fail("unknown identifier '" + full + "'");
          Token t{Tok::Var, std::string(1, c)};
          t.var = v;
          toks_.push_back(t);
        }
        i = j;
        continue;
      }
      if (std::string_view("+-*/^()").find(ch) != std::string_view::npos) {
        toks_.push_back({Tok::Op, std::string(1, ch)});
        ++i;
        continue;
      }
      fail(std::string("unexpected character '") + ch + "'");
    }
    toks_.push_back({Tok::End, "<end>"});
  }

  const Token& peek() const { return toks_[pos_]; }
  bool is_op(char c) const { return peek().kind == Tok::Op && peek().text[0] == c; }
  void expect(char c) {
    if (!is_op(c)) fail(std::string("expected '") + c + "' near '" + peek().text + "'");
    ++pos_;
  }

  SymExpr materialize(const Value& v) const {
    if (!v.factored) return v.expr;
    RationalFunction r = RationalFunction::constant(ctx_, v.scalar);
    for (const auto& [p, e] : v.facs) {
      if (e > 0) {
        r = r * RationalFunction(p.pow(static_cast<unsigned>(e)));
      } else if (e < 0) {
        r = r * RationalFunction::reciprocal(p, static_cast<unsigned>(-e));
      }
    }
    return SymExpr(r);
  }

  Value add(const Value& a, const Value& b, bool subtract) const {
    SymExpr s = subtract ? materialize(a) - materialize(b) : materialize(a) + materialize(b);
    if (s.is_zero()) return Value::from_poly(Polynomial(ctx_));
    if (s.is_rational() && s.rational_part().is_polynomial()) return Value::from_poly(s.rational_part().raw_numerator());
    if (s.is_rational()) {
      const RationalFunction r = s.rational_part();
      Value v = Value::from_poly(r.raw_numerator());
      for (const auto& f : r.denominator_factors()) v.facs.push_back({f.poly, -static_cast<int>(f.mult)});
      v.expr = s;
      return v;
    }
    return Value::from_expr(s);
  }

  Value mul(const Value& a, const Value& b, bool divide) const {
    if (a.factored && b.factored) {
      Value v;
      v.factored = true;
      v.scalar = a.scalar;
      v.facs = a.facs;
      if (divide) {
        if (b.scalar == 0) throw DivisionByZero("division by zero in expression");
        v.scalar /= b.scalar;
        for (const auto& [p, e] : b.facs) v.facs.push_back({p, -e});
      } else {
        v.scalar *= b.scalar;
        v.facs.insert(v.facs.end(), b.facs.begin(), b.facs.end());
      }
      v.expr = SymExpr(ctx_);  // materialized lazily
      return v;
    }
    if (divide) {
      if (!b.is_pure()) fail("division by a polygamma expression");
      const SymExpr bb = materialize(b);
      if (bb.is_zero()) throw DivisionByZero("division by zero in expression");
      return Value::from_expr(materialize(a) * (RationalFunction::constant(ctx_, 1) / bb.rational_part()));
    }
    return Value::from_expr(materialize(a) * materialize(b));
  }

  Value power(const Value& a, unsigned e) const {
    if (a.factored) {
      Value v = a;
      Rational s = 1;
      for (unsigned i = 0; i < e; ++i) s *= a.scalar;
      v.scalar = s;
      for (auto& [p, x] : v.facs) x *= static_cast<int>(e);
      return v;
    }
    return Value::from_expr(materialize(a).pow(e));
  }

  unsigned exponent() {
    if (peek().kind != Tok::Num) fail("exponent must be a non-negative integer");
    return static_cast<unsigned>(std::stoul(toks_[pos_++].text));
  }

  Value expr() {
    bool neg = false;
    if (is_op('+') || is_op('-')) {
      neg = is_op('-');
      ++pos_;
    }
    Value v = term();
    if (neg) v = negate(v);
    while (is_op('+') || is_op('-')) {
      const bool sub = is_op('-');
      ++pos_;
      v = add(v, term(), sub);
    }
    return v;
  }

  Value negate(const Value& v) const {
    if (v.factored) {
      Value r = v;
      r.scalar = -r.scalar;
      return r;
    }
    return Value::from_expr(-v.expr);
  }

  bool starts_primary() const {
    const Tok k = peek().kind;
    return k == Tok::Num || k == Tok::Var || k == Tok::Name || k == Tok::Psi || is_op('(');
  }

  Value term() {
    Value v = factor();
    while (true) {
      if (is_op('*') || is_op('/')) {
        const bool div = is_op('/');
        ++pos_;
        v = mul(v, factor(), div);
      } else if (starts_primary()) {
        v = mul(v, factor(), false);
      } else {
        return v;
      }
    }
  }

  Value factor() {
    if (is_op('-')) {
      ++pos_;
      return negate(factor());
    }
    Value v = primary();
    if (is_op('^')) {
      ++pos_;
      v = power(v, exponent());
    }
    return v;
  }

  Value primary() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::Num:
        ++pos_;
        return Value::from_poly(Polynomial::constant(ctx_, Rational(mpz_class(t.text))));
      case Tok::Var:
        ++pos_;
        return Value::from_poly(Polynomial::variable(ctx_, t.var));
      case Tok::Name: {
        ++pos_;
        return defs_.at(t.text);
      }
      case Tok::Psi: {
        ++pos_;
        unsigned pw = 1;
        if (is_op('^')) {
          ++pos_;
          pw = exponent();
        }
        expect('(');
        const Value arg = expr();
        expect(')');
        if (is_op('^')) {
          ++pos_;
          pw *= exponent();
        }
        const SymExpr a = materialize(arg);
        if (!a.is_rational() || !a.rational_part().is_polynomial()) fail("polygamma argument must be a polynomial");
        const Polynomial p = a.rational_part().raw_numerator();
        for (PsiBase b : {PsiBase::MPlusAlpha, PsiBase::Alpha, PsiBase::MN, PsiBase::N, PsiBase::NMinusM}) {
          if (base_context(b) != ctx_) continue;
          const Polynomial d = p - base_polynomial(b);
          if (d.is_constant() && d.constant_value().get_den() == 1) {
            const long off = d.constant_value().get_num().get_si();
            return Value::from_expr(SymExpr::psi(t.psi_order, b, static_cast<std::int32_t>(off), pw));
          }
        }
        fail("polygamma argument " + p.to_string() + " is not a shifted canonical base");
      }
      case Tok::Op:
        if (t.text == "(") {
          ++pos_;
          Value v = expr();
          expect(')');
          return v;
        }
        fail("unexpected '" + t.text + "'");
      case Tok::End:
        fail("unexpected end of expression");
    }
    fail("unreachable");
  }

  VarContext ctx_;
  const std::map<std::string, Value>& defs_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

SymExpr parse_expr(std::string_view text, VarContext ctx) {
  // split into statements: lines opening with an operator continue the
  // previous statement, "name = rhs" binds a name
  struct Stmt {
    std::string name;
    std::string body;
  };
  std::vector<Stmt> stmts;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    line = line.substr(b);
    std::size_t i = 0;
    while (i < line.size() && std::isalnum(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && (line[j] == ' ' || line[j] == '\t')) ++j;
    if (i > 0 && std::isalpha(static_cast<unsigned char>(line[0])) && j < line.size() && line[j] == '=') {
      stmts.push_back({line.substr(0, i), line.substr(j + 1)});
    } else if (!stmts.empty() && std::string_view("+-*/").find(line[0]) != std::string_view::npos) {
      stmts.back().body += " " + line;
    } else {
      stmts.push_back({"", line});
    }
  }
  if (stmts.empty()) throw ParseError("empty expression");
  std::map<std::string, Value> defs;
  SymExpr last(ctx);
  for (const auto& s : stmts) {
    Parser p(ctx, defs);
    Value v = p.parse(s.body);
    if (v.factored) {
      // materialize once and keep factors for later division
      RationalFunction r = RationalFunction::constant(ctx, v.scalar);
      for (const auto& [poly, e] : v.facs) {
        r = e > 0 ? r * RationalFunction(poly.pow(static_cast<unsigned>(e)))
                  : r * RationalFunction::reciprocal(poly, static_cast<unsigned>(-e));
      }
      v.expr = SymExpr(r);
      if (v.expr.is_zero()) v.expr = SymExpr(ctx);
    }
    last = v.expr;
    if (!s.name.empty()) defs[s.name] = std::move(v);
  }
  return last;
}

}  // namespace entcum
