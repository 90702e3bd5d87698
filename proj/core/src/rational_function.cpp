#include "entcum/rational_function.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>

#include "entcum/errors.hpp"

namespace entcum {

namespace {

__extension__ using u128 = unsigned __int128;

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % kPrime);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, a = mulmod(a, a))
    if (e & 1) r = mulmod(r, a);
  return r;
}

std::uint64_t invmod(std::uint64_t a) { return powmod(a, kPrime - 2); }

// nullopt when a coefficient denominator vanishes mod p
std::optional<std::uint64_t> eval_mod(const Polynomial& p, const std::array<std::uint64_t, kNumVars>& pt,
                                      std::size_t skip_var = kNumVars) {
  std::uint64_t s = 0;
  for (const auto& t : p.terms()) {
    std::uint64_t c = mpz_fdiv_ui(t.coeff.get_num_mpz_t(), kPrime);
    const std::uint64_t d = mpz_fdiv_ui(t.coeff.get_den_mpz_t(), kPrime);
    if (d == 0) return std::nullopt;
    if (d != 1) c = mulmod(c, invmod(d));
    for (std::size_t v = 0; v < kNumVars; ++v) {
      if (v == skip_var) continue;
      c = mulmod(c, powmod(pt[v], t.mono.exp[v]));
    }
    s += c;
    if (s >= kPrime) s -= kPrime;
  }
  return s;
}

// Cheap necessary condition for f | num when f is linear in some variable:
// num must vanish at points of f's zero set, checked mod a prime.
// False positives are caught by the exact division that follows.
bool vanishes_on_zero_set(const Polynomial& num, const Polynomial& f) {
  for (std::size_t v = 0; v < kNumVars; ++v) {
    if (f.degree_in(v) != 1) continue;
    const std::size_t u = 1 - v;
    std::vector<Polynomial::Term> at, bt;
    for (const auto& t : f.terms()) {
      if (t.mono.exp[v] == 1) {
        Polynomial::Term c = t;
        c.mono.exp[v] = 0;
        at.push_back(std::move(c));
      } else {
        bt.push_back(t);
      }
    }
    const Polynomial a = Polynomial::from_terms(f.context(), std::move(at));
    const Polynomial b = Polynomial::from_terms(f.context(), std::move(bt));
    static const std::uint64_t probes[] = {0x1d8e4e27c47d124fULL % kPrime, 0x0c3a5f9b6e21d487ULL % kPrime,
                                           0x17f0b3a9d2c4e615ULL % kPrime};
    int tried = 0;
    for (std::uint64_t pv : probes) {
      std::array<std::uint64_t, kNumVars> pt{};
      pt[u] = pv;
      const auto av = eval_mod(a, pt, v);
      const auto bv = eval_mod(b, pt, v);
      if (!av || !bv || *av == 0) continue;
      pt[v] = mulmod(kPrime - *bv, invmod(*av));
      const auto nv = eval_mod(num, pt);
      if (!nv) return true;
      if (*nv != 0) return false;
      if (++tried == 2) break;
    }
    return true;
  }
  return true;  // no cheap probe; let exact division decide
}

std::optional<Polynomial> try_divide(const Polynomial& num, const Polynomial& f) {
  if (num.is_zero()) return num;
  if (!vanishes_on_zero_set(num, f)) return std::nullopt;
  return num.divide_exact(f);
}

}  // namespace

RationalFunction::RationalFunction(Polynomial num) : num_(std::move(num)) {}

RationalFunction RationalFunction::constant(VarContext ctx, const Rational& c) {
  return RationalFunction(Polynomial::constant(ctx, c));
}

RationalFunction RationalFunction::variable(VarContext ctx, std::size_t index) {
  return RationalFunction(Polynomial::variable(ctx, index));
}

bool RationalFunction::is_one() const {
  return den_.empty() && num_.size() == 1 && num_.is_constant() && num_.constant_value() == 1;
}

void RationalFunction::sort_factors() {
  std::sort(den_.begin(), den_.end(),
            [](const Factor& a, const Factor& b) { return Polynomial::compare(a.poly, b.poly) < 0; });
}

// Appends p^mult to the denominator: content moves into the numerator,
// monomial content becomes variable factors, the rest is one factor.
void RationalFunction::add_denominator(const Polynomial& p, unsigned mult) {
  if (p.is_zero()) throw DivisionByZero("rational function division by zero");
  if (mult == 0) return;
  const Rational c = p.content();
  Rational scale = 1;
  for (unsigned i = 0; i < mult; ++i) scale /= c;
  num_ *= scale;
  Polynomial prim = p * Rational(1 / c);
  const Monomial mono = prim.monomial_content();
  if (mono.total_degree() != 0) prim = prim.divide_monomial(mono);
  auto push = [&](Polynomial f, unsigned e) {
    for (auto& existing : den_) {
      if (existing.poly == f) {
        existing.mult += e;
        return;
      }
    }
    den_.push_back({std::move(f), e});
  };
  for (std::size_t v = 0; v < kNumVars; ++v) {
    if (mono.exp[v] != 0) push(Polynomial::variable(context(), v), mono.exp[v] * mult);
  }
  if (!prim.is_constant()) push(std::move(prim), mult);
}

void RationalFunction::reduce() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  for (auto& f : den_) {
    while (f.mult > 0) {
      auto q = try_divide(num_, f.poly);
      if (!q) break;
      num_ = std::move(*q);
      --f.mult;
    }
  }
  std::erase_if(den_, [](const Factor& f) { return f.mult == 0; });
}

RationalFunction RationalFunction::fraction(const Polynomial& num, const Polynomial& den) {
  require_same_context(num.context(), den.context(), "fraction");
  RationalFunction r(num);
  r.add_denominator(den, 1);
  r.reduce();
  r.sort_factors();
  return r;
}

RationalFunction RationalFunction::reciprocal(const Polynomial& p, unsigned e) {
  RationalFunction r(Polynomial::constant(p.context(), 1));
  r.add_denominator(p, e);
  r.sort_factors();
  return r;
}

RationalFunction RationalFunction::from_factors(Polynomial num, std::vector<Factor> factors) {
  RationalFunction r(std::move(num));
  for (const auto& f : factors) {
    require_same_context(r.context(), f.poly.context(), "from_factors");
    r.add_denominator(f.poly, f.mult);
  }
  r.reduce();
  r.sort_factors();
  return r;
}

RationalFunction RationalFunction::canonicalized() const {
  return from_factors(num_, den_);
}

Polynomial RationalFunction::numerator() const {
  if (num_.is_zero()) return num_;
  const Rational c = num_.content();
  return num_ * Rational(Rational(c.get_num()) / c);
}

Polynomial RationalFunction::denominator() const {
  Polynomial d = Polynomial::constant(context(), 1);
  for (const auto& f : den_) d = d * f.poly.pow(f.mult);
  if (num_.is_zero()) return d;
  const Rational c = num_.content();
  return d * Rational(c.get_den());
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction& RationalFunction::operator*=(const Rational& c) {
  num_ *= c;
  if (num_.is_zero()) den_.clear();
  return *this;
}

namespace {

// Multiplicity of `f` in a factor list (0 if absent).
unsigned multiplicity(const std::vector<RationalFunction::Factor>& fs, const Polynomial& f) {
  for (const auto& x : fs) {
    if (x.poly == f) return x.mult;
  }
  return 0;
}

bool same_factors(const std::vector<RationalFunction::Factor>& a,
                  const std::vector<RationalFunction::Factor>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].mult != b[i].mult || !(a[i].poly == b[i].poly)) return false;
  }
  return true;
}

}  // namespace

RationalFunction& RationalFunction::operator+=(const RationalFunction& rhs) {
  require_same_context(context(), rhs.context(), "rational add");
  if (rhs.is_zero()) return *this;
  if (is_zero()) return *this = rhs;
  if (same_factors(den_, rhs.den_)) {
    num_ += rhs.num_;
    reduce();
    return *this;
  }
  // lcm of the two factor lists
  std::vector<Factor> lcm = den_;
  for (const auto& f : rhs.den_) {
    bool found = false;
    for (auto& g : lcm) {
      if (g.poly == f.poly) {
        g.mult = std::max(g.mult, f.mult);
        found = true;
        break;
      }
    }
    if (!found) lcm.push_back(f);
  }
  auto cofactor = [&](const std::vector<Factor>& own) {
    Polynomial c = Polynomial::constant(context(), 1);
    for (const auto& g : lcm) {
      const unsigned e = g.mult - multiplicity(own, g.poly);
      if (e != 0) c = c * g.poly.pow(e);
    }
    return c;
  };
  num_ = num_ * cofactor(den_) + rhs.num_ * cofactor(rhs.den_);
  den_ = std::move(lcm);
  reduce();
  sort_factors();
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& rhs) {
  return *this += -rhs;
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  require_same_context(a.context(), b.context(), "rational mul");
  if (a.is_zero() || b.is_zero()) return RationalFunction(a.context());
  if (b.den_.empty() && b.num_.is_constant()) return a * b.num_.constant_value();
  if (a.den_.empty() && a.num_.is_constant()) return b * a.num_.constant_value();
  // cancel crosswise before multiplying
  Polynomial na = a.num_;
  Polynomial nb = b.num_;
  std::vector<RationalFunction::Factor> da = a.den_;
  std::vector<RationalFunction::Factor> db = b.den_;
  auto cancel = [](Polynomial& n, std::vector<RationalFunction::Factor>& fs) {
    for (auto& f : fs) {
      while (f.mult > 0) {
        auto q = try_divide(n, f.poly);
        if (!q) break;
        n = std::move(*q);
        --f.mult;
      }
    }
  };
  cancel(na, db);
  cancel(nb, da);
  RationalFunction r(na * nb);
  r.den_ = std::move(da);
  for (auto& f : db) {
    if (f.mult == 0) continue;
    bool found = false;
    for (auto& g : r.den_) {
      if (g.poly == f.poly) {
        g.mult += f.mult;
        found = true;
        break;
      }
    }
    if (!found) r.den_.push_back(std::move(f));
  }
  std::erase_if(r.den_, [](const RationalFunction::Factor& f) { return f.mult == 0; });
  r.sort_factors();
  return r;
}

RationalFunction& RationalFunction::operator*=(const RationalFunction& rhs) {
  return *this = *this * rhs;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& rhs) {
  require_same_context(context(), rhs.context(), "rational div");
  if (rhs.is_zero()) throw DivisionByZero("rational function division by zero");
  // invert rhs: its factors become numerator, its numerator is split
  RationalFunction inv(context());
  Polynomial top = Polynomial::constant(context(), 1);
  for (const auto& f : rhs.den_) top = top * f.poly.pow(f.mult);
  inv.num_ = std::move(top);
  // peel known factors of our own denominator off rhs's numerator first
  Polynomial rest = rhs.num_;
  for (const auto& f : den_) {
    while (true) {
      auto q = try_divide(rest, f.poly);
      if (!q) break;
      rest = std::move(*q);
      inv.add_denominator(f.poly, 1);
    }
  }
  inv.add_denominator(rest, 1);
  inv.sort_factors();
  return *this = *this * inv;
}

bool operator==(const RationalFunction& a, const RationalFunction& b) {
  if (a.context() != b.context()) return false;
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  if (same_factors(a.den_, b.den_)) return a.num_ == b.num_;
  auto product = [&](const std::vector<RationalFunction::Factor>& fs) {
    Polynomial d = Polynomial::constant(a.context(), 1);
    for (const auto& f : fs) d = d * f.poly.pow(f.mult);
    return d;
  };
  return a.num_ * product(b.den_) == b.num_ * product(a.den_);
}

int RationalFunction::compare(const RationalFunction& a, const RationalFunction& b) {
  if (int c = Polynomial::compare(a.num_, b.num_); c != 0) return c;
  const std::size_t n = std::min(a.den_.size(), b.den_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = Polynomial::compare(a.den_[i].poly, b.den_[i].poly); c != 0) return c;
    if (a.den_[i].mult != b.den_[i].mult) return a.den_[i].mult > b.den_[i].mult ? 1 : -1;
  }
  if (a.den_.size() != b.den_.size()) return a.den_.size() > b.den_.size() ? 1 : -1;
  return 0;
}

Rational RationalFunction::evaluate(std::span<const Rational, kNumVars> point) const {
  Rational d = 1;
  for (const auto& f : den_) {
    const Rational v = f.poly.evaluate(point);
    if (v == 0) {
      throw PoleError("denominator factor " + f.poly.to_string() + " vanishes at (" +
                      point[0].get_str() + ", " + point[1].get_str() + ")");
    }
    for (unsigned i = 0; i < f.mult; ++i) d *= v;
  }
  return num_.evaluate(point) / d;
}

RationalFunction RationalFunction::substitute(const std::array<Polynomial, kNumVars>& images) const {
  RationalFunction r(num_.substitute(images));
  for (const auto& f : den_) r.add_denominator(f.poly.substitute(images), f.mult);
  r.reduce();
  r.sort_factors();
  return r;
}

RationalFunction RationalFunction::derivative(std::size_t var) const {
  if (den_.empty()) return RationalFunction(num_.derivative(var));
  // d(N/D) with D = prod f_i^e_i, written over D * prod f_i
  Polynomial radical = Polynomial::constant(context(), 1);
  for (const auto& f : den_) radical = radical * f.poly;
  Polynomial top = num_.derivative(var) * radical;
  for (const auto& f : den_) {
    const Polynomial df = f.poly.derivative(var);
    if (df.is_zero()) continue;
    Polynomial others = Polynomial::constant(context(), 1);
    for (const auto& g : den_) {
      if (&g != &f) others = others * g.poly;
    }
    top -= num_ * df * others * Rational(f.mult);
  }
  RationalFunction r(std::move(top));
  r.den_ = den_;
  for (auto& f : r.den_) f.mult += 1;
  r.reduce();
  return r;
}

RationalFunction RationalFunction::pow(unsigned e) const {
  RationalFunction r = constant(context(), 1);
  for (unsigned i = 0; i < e; ++i) r = r * *this;
  return r;
}

std::string RationalFunction::to_string(Polynomial::Style style) const {
  if (den_.empty()) return num_.to_string(style);
  const Polynomial n = numerator();
  const Polynomial d = denominator();
  if (style == Polynomial::Style::Latex) {
    return "\\frac{" + n.to_string(style) + "}{" + d.to_string(style) + "}";
  }
  return "(" + n.to_string(style) + ")/(" + d.to_string(style) + ")";
}

Polynomial substitute_alpha(const Polynomial& p) {
  if (p.context() != VarContext::MAlpha) throw ContextMismatch("substitute_alpha expects {m,alpha}");
  const Polynomial m = Polynomial::variable(VarContext::MN, kVarM);
  const Polynomial n = Polynomial::variable(VarContext::MN, kVarSecond);
  return p.substitute({m, n - m});
}

RationalFunction substitute_alpha(const RationalFunction& f) {
  if (f.context() != VarContext::MAlpha) throw ContextMismatch("substitute_alpha expects {m,alpha}");
  const Polynomial m = Polynomial::variable(VarContext::MN, kVarM);
  const Polynomial n = Polynomial::variable(VarContext::MN, kVarSecond);
  return f.substitute({m, n - m});
}

}  // namespace entcum
