#include "entcum/polynomial.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "entcum/errors.hpp"

namespace entcum {

void require_same_context(VarContext a, VarContext b, std::string_view op) {
  if (a != b) {
    throw ContextMismatch(std::string(op) + ": context {" +
                          std::string(context_label(a)) + "} vs {" +
                          std::string(context_label(b)) + "}");
  }
}

std::strong_ordering grlex(const Monomial& a, const Monomial& b) {
  if (auto c = a.total_degree() <=> b.total_degree(); c != 0) return c;
  return a.exp[0] <=> b.exp[0];
}

namespace {

// descending grlex, as used for term storage
struct GrlexDesc {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex(a, b) > 0; }
};

}  // namespace

Polynomial Polynomial::constant(VarContext ctx, const Rational& c) {
  Polynomial p(ctx);
  if (c != 0) p.terms_.push_back({Monomial{}, c});
  if (c != 0) p.terms_.back().coeff.canonicalize();
  return p;
}

Polynomial Polynomial::variable(VarContext ctx, std::size_t index) {
  if (index >= kNumVars) throw DomainError("variable index out of range");
  Polynomial p(ctx);
  Monomial mono;
  mono.exp[index] = 1;
  p.terms_.push_back({mono, Rational(1)});
  return p;
}

Polynomial Polynomial::from_terms(VarContext ctx, std::vector<Term> terms) {
  for (auto& t : terms) t.coeff.canonicalize();
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return grlex(a.mono, b.mono) > 0; });
  Polynomial p(ctx);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.total_degree() == 0);
}

Rational Polynomial::constant_value() const {
  if (!terms_.empty() && terms_.back().mono.total_degree() == 0) return terms_.back().coeff;
  return Rational(0);
}

std::uint32_t Polynomial::total_degree() const {
  return terms_.empty() ? 0 : terms_.front().mono.total_degree();
}

std::uint32_t Polynomial::degree_in(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exp[var]);
  return d;
}

void Polynomial::require_context(const Polynomial& other, std::string_view op) const {
  require_same_context(ctx_, other.ctx_, op);
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

namespace {

std::vector<Polynomial::Term> merge(const std::vector<Polynomial::Term>& a,
                                    const std::vector<Polynomial::Term>& b, bool negate_b) {
  std::vector<Polynomial::Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    std::strong_ordering c = std::strong_ordering::equal;
    if (i == a.size()) {
      c = std::strong_ordering::less;
    } else if (j == b.size()) {
      c = std::strong_ordering::greater;
    } else {
      c = grlex(a[i].mono, b[j].mono);
    }
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back(b[j++]);
      if (negate_b) out.back().coeff = -out.back().coeff;
    } else {
      Rational s = negate_b ? Rational(a[i].coeff - b[j].coeff) : Rational(a[i].coeff + b[j].coeff);
      if (s != 0) out.push_back({a[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  return out;
}

// lcm of coefficient denominators
mpz_class common_denominator(const std::vector<Polynomial::Term>& ts) {
  mpz_class l = 1;
  for (const auto& t : ts) {
    if (t.coeff.get_den() != 1) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  return l;
}

}  // namespace

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  require_context(rhs, "polynomial add");
  if (rhs.terms_.empty()) return *this;
  if (terms_.empty()) {
    terms_ = rhs.terms_;
    return *this;
  }
  terms_ = merge(terms_, rhs.terms_, false);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  require_context(rhs, "polynomial sub");
  if (rhs.terms_.empty()) return *this;
  terms_ = merge(terms_, rhs.terms_, true);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  if (c == 1) return *this;
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& rhs) {
  *this = *this * rhs;
  return *this;
}

// Dense product over integer images of both operands. Both factors are
// scaled to integer coefficients so the inner loop runs on mpz only.
Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.require_context(b, "polynomial mul");
  Polynomial out(a.ctx_);
  if (a.terms_.empty() || b.terms_.empty()) return out;
  if (b.terms_.size() == 1 && b.terms_[0].mono.total_degree() == 0) return a * b.terms_[0].coeff;
  if (a.terms_.size() == 1 && a.terms_[0].mono.total_degree() == 0) return b * a.terms_[0].coeff;

  const mpz_class da = common_denominator(a.terms_);
  const mpz_class db = common_denominator(b.terms_);
  auto to_int = [](const std::vector<Polynomial::Term>& ts, const mpz_class& d) {
    std::vector<mpz_class> v;
    v.reserve(ts.size());
    for (const auto& t : ts) {
      if (d == 1) {
        v.emplace_back(t.coeff.get_num());
      } else {
        mpz_class q = d / t.coeff.get_den();
        v.emplace_back(q * t.coeff.get_num());
      }
    }
    return v;
  };
  const auto ia = to_int(a.terms_, da);
  const auto ib = to_int(b.terms_, db);

  const std::uint32_t d0 = a.degree_in(0) + b.degree_in(0);
  const std::uint32_t d1 = a.degree_in(1) + b.degree_in(1);
  const std::size_t w = d1 + 1;
  std::vector<mpz_class> grid((d0 + 1) * w);
  std::vector<char> used(grid.size(), 0);
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    const auto& ea = a.terms_[i].mono.exp;
    for (std::size_t j = 0; j < b.terms_.size(); ++j) {
      const auto& eb = b.terms_[j].mono.exp;
      const std::size_t idx = (ea[0] + eb[0]) * w + (ea[1] + eb[1]);
      mpz_addmul(grid[idx].get_mpz_t(), ia[i].get_mpz_t(), ib[j].get_mpz_t());
      used[idx] = 1;
    }
  }
  const mpz_class den = da * db;
  const std::uint32_t maxdeg = a.total_degree() + b.total_degree();
  for (std::int64_t td = maxdeg; td >= 0; --td) {
    const std::int64_t hi = std::min<std::int64_t>(td, d0);
    const std::int64_t lo = std::max<std::int64_t>(0, td - static_cast<std::int64_t>(d1));
    for (std::int64_t e0 = hi; e0 >= lo; --e0) {
      const std::size_t idx = static_cast<std::size_t>(e0) * w + static_cast<std::size_t>(td - e0);
      if (!used[idx] || grid[idx] == 0) continue;
      Monomial mono;
      mono.exp[0] = static_cast<std::uint32_t>(e0);
      mono.exp[1] = static_cast<std::uint32_t>(td - e0);
      Rational c(grid[idx], den);
      if (den != 1) c.canonicalize();
      out.terms_.push_back({mono, std::move(c)});
    }
  }
  return out;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.ctx_ != b.ctx_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

int Polynomial::compare(const Polynomial& a, const Polynomial& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = grlex(a.terms_[i].mono, b.terms_[i].mono); c != 0) return c > 0 ? 1 : -1;
    if (int c = cmp(a.terms_[i].coeff, b.terms_[i].coeff); c != 0) return c > 0 ? 1 : -1;
  }
  if (a.terms_.size() != b.terms_.size()) return a.terms_.size() > b.terms_.size() ? 1 : -1;
  return 0;
}

Rational Polynomial::evaluate(std::span<const Rational, kNumVars> point) const {
  if (terms_.empty()) return Rational(0);
  // powers cached per variable
  std::array<std::vector<Rational>, kNumVars> pw;
  for (std::size_t v = 0; v < kNumVars; ++v) {
    const std::uint32_t d = degree_in(v);
    pw[v].reserve(d + 1);
    pw[v].emplace_back(1);
    Rational x = point[v];
    x.canonicalize();
    for (std::uint32_t e = 1; e <= d; ++e) pw[v].push_back(pw[v].back() * x);
  }
  Rational s = 0;
  for (const auto& t : terms_) s += t.coeff * pw[0][t.mono.exp[0]] * pw[1][t.mono.exp[1]];
  return s;
}

Polynomial Polynomial::substitute(const std::array<Polynomial, kNumVars>& images) const {
  const VarContext target = images[0].context();
  require_same_context(target, images[1].context(), "substitute images");
  std::array<std::vector<Polynomial>, kNumVars> pw;
  for (std::size_t v = 0; v < kNumVars; ++v) {
    const std::uint32_t d = degree_in(v);
    pw[v].push_back(Polynomial::constant(target, 1));
    for (std::uint32_t e = 1; e <= d; ++e) pw[v].push_back(pw[v].back() * images[v]);
  }
  // group by exponent of var 0 to save multiplications
  Polynomial out(target);
  std::map<std::uint32_t, Polynomial> by_e0;
  for (const auto& t : terms_) {
    auto it = by_e0.try_emplace(t.mono.exp[0], target).first;
    it->second += pw[1][t.mono.exp[1]] * t.coeff;
  }
  for (const auto& [e0, inner] : by_e0) out += pw[0][e0] * inner;
  return out;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  std::vector<Term> ts;
  for (const auto& t : terms_) {
    if (t.mono.exp[var] == 0) continue;
    Term d = t;
    d.coeff *= t.mono.exp[var];
    d.mono.exp[var] -= 1;
    ts.push_back(std::move(d));
  }
  return from_terms(ctx_, std::move(ts));
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial r = constant(ctx_, 1);
  Polynomial b = *this;
  while (e != 0) {
    if (e & 1U) r = r * b;
    e >>= 1U;
    if (e != 0) b = b * b;
  }
  return r;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& divisor) const {
  require_context(divisor, "polynomial divide");
  if (divisor.is_zero()) throw DivisionByZero("polynomial division by zero");
  if (terms_.empty()) return Polynomial(ctx_);
  if (divisor.is_constant()) return *this * Rational(1 / divisor.terms_[0].coeff);
  const Term& lt = divisor.terms_.front();
  if (total_degree() < lt.mono.total_degree()) return std::nullopt;
  for (std::size_t v = 0; v < kNumVars; ++v) {
    if (degree_in(v) < divisor.degree_in(v)) return std::nullopt;
  }

  std::map<Monomial, Rational, GrlexDesc> rem;
  for (const auto& t : terms_) rem.emplace(t.mono, t.coeff);
  std::vector<Term> quot;
  const Rational inv_lc = 1 / lt.coeff;
  while (!rem.empty()) {
    auto it = rem.begin();
    if (!lt.mono.divides(it->first)) return std::nullopt;
    Monomial qm;
    for (std::size_t v = 0; v < kNumVars; ++v) qm.exp[v] = it->first.exp[v] - lt.mono.exp[v];
    Rational qc = it->second * inv_lc;
    rem.erase(it);
    for (std::size_t i = 1; i < divisor.terms_.size(); ++i) {
      Monomial pm;
      for (std::size_t v = 0; v < kNumVars; ++v) pm.exp[v] = qm.exp[v] + divisor.terms_[i].mono.exp[v];
      Rational delta = qc * divisor.terms_[i].coeff;
      auto [pos, inserted] = rem.try_emplace(pm, Rational(0));
      pos->second -= delta;
      if (pos->second == 0) rem.erase(pos);
    }
    quot.push_back({qm, std::move(qc)});
  }
  Polynomial q(ctx_);
  q.terms_ = std::move(quot);  // produced in descending order
  return q;
}

Rational Polynomial::content() const {
  if (terms_.empty()) return Rational(0);
  mpz_class g = 0;
  mpz_class l = 1;
  for (const auto& t : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  Rational c(g, l);
  c.canonicalize();
  if (terms_.front().coeff < 0) c = -c;
  return c;
}

Monomial Polynomial::monomial_content() const {
  Monomial m;
  if (terms_.empty()) return m;
  m = terms_.front().mono;
  for (const auto& t : terms_) {
    for (std::size_t v = 0; v < kNumVars; ++v) m.exp[v] = std::min(m.exp[v], t.mono.exp[v]);
  }
  return m;
}

Polynomial Polynomial::divide_monomial(const Monomial& mono) const {
  Polynomial r = *this;
  for (auto& t : r.terms_) {
    for (std::size_t v = 0; v < kNumVars; ++v) {
      if (t.mono.exp[v] < mono.exp[v]) throw InvariantViolation("monomial does not divide polynomial");
      t.mono.exp[v] -= mono.exp[v];
    }
  }
  return r;
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view s) {
  std::string str(s);
  if (str.empty()) throw ParseError("empty rational");
  std::size_t i = (str[0] == '-' || str[0] == '+') ? 1 : 0;
  bool slash = false;
  bool digit = false;
  for (; i < str.size(); ++i) {
    if (str[i] == '/' && !slash && digit) {
      slash = true;
      digit = false;
    } else if (str[i] >= '0' && str[i] <= '9') {
      digit = true;
    } else {
      throw ParseError("malformed rational '" + str + "'");
    }
  }
  if (!digit) throw ParseError("malformed rational '" + str + "'");
  if (str[0] == '+') str.erase(0, 1);
  Rational q(str, 10);
  if (q.get_den() == 0) throw ParseError("zero denominator in '" + str + "'");
  q.canonicalize();
  return q;
}

std::string Polynomial::to_string(Style style) const {
  if (terms_.empty()) return "0";
  const auto names = variable_names(ctx_);
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    const bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    const bool is_const = t.mono.total_degree() == 0;
    bool wrote = false;
    if (c != 1 || is_const) {
      if (style == Style::Latex && c.get_den() != 1) {
        os << "\\frac{" << c.get_num() << "}{" << c.get_den() << "}";
      } else {
        os << c.get_str();
      }
      wrote = true;
    }
    for (std::size_t v = 0; v < kNumVars; ++v) {
      const auto e = t.mono.exp[v];
      if (e == 0) continue;
      if (style == Style::Text) {
        if (wrote) os << '*';
        os << names[v];
        if (e > 1) os << '^' << e;
      } else {
        os << (names[v] == "alpha" ? "\\alpha" : std::string(names[v]));
        if (e > 1) os << "^{" << e << '}';
      }
      wrote = true;
    }
  }
  return os.str();
}

}  // namespace entcum
