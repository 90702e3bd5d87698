#include "entcum/symexpr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <tuple>

#include "entcum/errors.hpp"

namespace entcum {

VarContext base_context(PsiBase b) {
  return (b == PsiBase::MPlusAlpha || b == PsiBase::Alpha) ? VarContext::MAlpha : VarContext::MN;
}

Polynomial base_polynomial(PsiBase b) {
  const VarContext c = base_context(b);
  const Polynomial m = Polynomial::variable(c, kVarM);
  const Polynomial y = Polynomial::variable(c, kVarSecond);
  switch (b) {
    case PsiBase::MPlusAlpha: return m + y;
    case PsiBase::Alpha: return y;
    case PsiBase::MN: return m * y;
    case PsiBase::N: return y;
    case PsiBase::NMinusM: return y - m;
  }
  throw InvariantViolation("unknown polygamma base");
}

std::string_view base_name(PsiBase b) {
  switch (b) {
    case PsiBase::MPlusAlpha: return "m+alpha";
    case PsiBase::Alpha: return "alpha";
    case PsiBase::MN: return "mn";
    case PsiBase::N: return "n";
    case PsiBase::NMinusM: return "n-m";
  }
  return "?";
}

std::optional<PsiBase> base_from_name(std::string_view s) {
  for (PsiBase b : {PsiBase::MPlusAlpha, PsiBase::Alpha, PsiBase::MN, PsiBase::N, PsiBase::NMinusM}) {
    if (base_name(b) == s) return b;
  }
  return std::nullopt;
}

namespace {

auto factor_key(const PsiFactor& f) { return std::make_tuple(f.order, f.base, f.offset); }

// Multiplies two sorted factor lists, merging powers.
FactorList merge_factors(const FactorList& a, const FactorList& b) {
  FactorList out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && factor_key(a[i]) < factor_key(b[j]))) {
      out.push_back(a[i++]);
    } else if (i == a.size() || factor_key(b[j]) < factor_key(a[i])) {
      out.push_back(b[j++]);
    } else {
      PsiFactor f = a[i++];
      f.power += b[j++].power;
      out.push_back(f);
    }
  }
  return out;
}

void normalize_factors(FactorList& fs) {
  std::sort(fs.begin(), fs.end(), [](const PsiFactor& a, const PsiFactor& b) { return factor_key(a) < factor_key(b); });
  FactorList out;
  for (const auto& f : fs) {
    if (f.power == 0) continue;
    if (!out.empty() && factor_key(out.back()) == factor_key(f)) {
      out.back().power += f.power;
    } else {
      out.push_back(f);
    }
  }
  fs = std::move(out);
}

}  // namespace

bool FactorListLess::operator()(const FactorList& a, const FactorList& b) const {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const PsiFactor& x, const PsiFactor& y) {
                                        return std::make_tuple(x.order, x.base, x.offset, x.power) <
                                               std::make_tuple(y.order, y.base, y.offset, y.power);
                                      });
}

SymExpr::SymExpr(const RationalFunction& c) : ctx_(c.context()) {
  if (!c.is_zero()) terms_.emplace(FactorList{}, c);
}

SymExpr::SymExpr(const Polynomial& p) : SymExpr(RationalFunction(p)) {}

SymExpr SymExpr::constant(VarContext ctx, const Rational& c) {
  return SymExpr(RationalFunction::constant(ctx, c));
}

SymExpr SymExpr::psi(std::uint32_t order, PsiBase base, std::int32_t offset, std::uint32_t power) {
  const VarContext ctx = base_context(base);
  return term(RationalFunction::constant(ctx, 1), FactorList{PsiFactor{order, base, offset, power}});
}

SymExpr SymExpr::term(const RationalFunction& coeff, FactorList factors) {
  SymExpr e(coeff.context());
  for (const auto& f : factors) {
    if (base_context(f.base) != coeff.context()) {
      throw ContextMismatch("polygamma base " + std::string(base_name(f.base)) + " outside context {" +
                            std::string(context_label(coeff.context())) + "}");
    }
  }
  normalize_factors(factors);
  e.add_term(factors, coeff);
  return e;
}

void SymExpr::add_term(const FactorList& factors, const RationalFunction& coeff) {
  if (coeff.is_zero()) return;
  require_same_context(ctx_, coeff.context(), "symexpr add_term");
  auto [it, inserted] = terms_.try_emplace(factors, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool SymExpr::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

RationalFunction SymExpr::rational_part() const {
  auto it = terms_.find(FactorList{});
  return it == terms_.end() ? RationalFunction(ctx_) : it->second;
}

bool SymExpr::is_canonical() const {
  for (const auto& [fs, c] : terms_) {
    for (const auto& f : fs) {
      if (f.offset != 0) return false;
    }
  }
  return true;
}

int SymExpr::max_order() const {
  int m = -1;
  for (const auto& [fs, c] : terms_) {
    for (const auto& f : fs) m = std::max(m, static_cast<int>(f.order));
  }
  return m;
}

bool SymExpr::uses_base(PsiBase b) const {
  for (const auto& [fs, c] : terms_) {
    for (const auto& f : fs) {
      if (f.base == b) return true;
    }
  }
  return false;
}

SymExpr SymExpr::operator-() const {
  SymExpr r = *this;
  for (auto& [fs, c] : r.terms_) c = -c;
  return r;
}

SymExpr& SymExpr::operator+=(const SymExpr& rhs) {
  require_same_context(ctx_, rhs.ctx_, "symexpr add");
  for (const auto& [fs, c] : rhs.terms_) add_term(fs, c);
  return *this;
}

SymExpr& SymExpr::operator-=(const SymExpr& rhs) {
  require_same_context(ctx_, rhs.ctx_, "symexpr sub");
  for (const auto& [fs, c] : rhs.terms_) add_term(fs, -c);
  return *this;
}

SymExpr& SymExpr::operator*=(const RationalFunction& c) {
  require_same_context(ctx_, c.context(), "symexpr scale");
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [fs, v] : terms_) v = v * c;
  return *this;
}

SymExpr& SymExpr::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [fs, v] : terms_) v *= c;
  return *this;
}

SymExpr& SymExpr::operator*=(const SymExpr& rhs) { return *this = *this * rhs; }

SymExpr operator*(const SymExpr& a, const SymExpr& b) {
  require_same_context(a.ctx_, b.ctx_, "symexpr mul");
  SymExpr r(a.ctx_);
  for (const auto& [fa, ca] : a.terms_) {
    for (const auto& [fb, cb] : b.terms_) r.add_term(merge_factors(fa, fb), ca * cb);
  }
  return r;
}

SymExpr SymExpr::pow(unsigned e) const {
  SymExpr r = constant(ctx_, 1);
  for (unsigned i = 0; i < e; ++i) r = r * *this;
  return r;
}

namespace {

Rational factorial(unsigned k) {
  Rational f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

// psi_k(B + c) written over psi_k(B):
//   c > 0:  psi_k(B) + (-1)^k k! sum_{i=0}^{c-1} 1/(B+i)^{k+1}
//   c < 0:  psi_k(B) - (-1)^k k! sum_{i=1}^{-c} 1/(B-i)^{k+1}
SymExpr expand_single(const PsiFactor& f) {
  const Polynomial b = base_polynomial(f.base);
  const VarContext ctx = b.context();
  const Rational sign_fact = (f.order % 2 == 0 ? 1 : -1) * factorial(f.order);
  RationalFunction corr(ctx);
  if (f.offset > 0) {
    for (std::int32_t i = 0; i < f.offset; ++i) {
      corr += RationalFunction::reciprocal(b + Polynomial::constant(ctx, i), f.order + 1);
    }
    corr *= sign_fact;
  } else {
    for (std::int32_t i = 1; i <= -f.offset; ++i) {
      corr += RationalFunction::reciprocal(b - Polynomial::constant(ctx, i), f.order + 1);
    }
    corr *= Rational(-sign_fact);
  }
  SymExpr one = SymExpr::psi(f.order, f.base) + SymExpr(corr);
  return one.pow(f.power);
}

}  // namespace

SymExpr canonicalize(const SymExpr& e) {
  if (e.is_canonical()) return e;
  SymExpr out(e.context());
  for (const auto& [fs, c] : e.terms()) {
    bool shifted = false;
    for (const auto& f : fs) shifted = shifted || f.offset != 0;
    if (!shifted) {
      out.add_term(fs, c);
      continue;
    }
    FactorList plain;
    SymExpr prod(c);
    for (const auto& f : fs) {
      if (f.offset == 0) {
        plain.push_back(f);
      } else {
        prod = prod * expand_single(f);
      }
    }
    if (!plain.empty()) prod = prod * SymExpr::term(RationalFunction::constant(e.context(), 1), plain);
    out += prod;
  }
  return out;
}

SymExpr shift_m(const SymExpr& e, int direction) {
  if (e.context() != VarContext::MAlpha) throw ContextMismatch("shift_m is defined on {m,alpha} only");
  if (direction != 1 && direction != -1) throw DomainError("shift_m direction must be +1 or -1");
  const Polynomial m = Polynomial::variable(VarContext::MAlpha, kVarM);
  const Polynomial a = Polynomial::variable(VarContext::MAlpha, kVarSecond);
  const std::array<Polynomial, kNumVars> images{m + Polynomial::constant(VarContext::MAlpha, direction), a};
  SymExpr out(e.context());
  for (const auto& [fs, c] : e.terms()) {
    FactorList moved = fs;
    for (auto& f : moved) {
      if (f.base == PsiBase::MPlusAlpha) f.offset += direction;
    }
    normalize_factors(moved);
    out.add_term(moved, c.substitute(images));
  }
  return canonicalize(out);
}

SymExpr ddalpha(const SymExpr& e) {
  if (e.context() != VarContext::MAlpha) throw ContextMismatch("ddalpha is defined on {m,alpha} only");
  SymExpr out(e.context());
  for (const auto& [fs, c] : e.terms()) {
    out.add_term(fs, c.derivative(kVarSecond));
    for (std::size_t i = 0; i < fs.size(); ++i) {
      // both bases have unit alpha-derivative
      FactorList d = fs;
      const PsiFactor f = d[i];
      d[i].power -= 1;
      d.push_back(PsiFactor{f.order + 1, f.base, f.offset, 1});
      normalize_factors(d);
      out.add_term(d, c * Rational(f.power));
    }
  }
  return out;
}

SymExpr substitute_alpha(const SymExpr& e) {
  if (e.context() != VarContext::MAlpha) throw ContextMismatch("substitute_alpha expects {m,alpha}");
  SymExpr out(VarContext::MN);
  for (const auto& [fs, c] : e.terms()) {
    FactorList mapped = fs;
    for (auto& f : mapped) f.base = f.base == PsiBase::MPlusAlpha ? PsiBase::N : PsiBase::NMinusM;
    normalize_factors(mapped);
    out.add_term(mapped, substitute_alpha(c));
  }
  return out;
}

SymExpr specialize_m_one(const SymExpr& e) {
  if (e.context() != VarContext::MN) throw ContextMismatch("specialize_m_one expects {m,n}");
  const Polynomial one = Polynomial::constant(VarContext::MN, 1);
  const Polynomial n = Polynomial::variable(VarContext::MN, kVarSecond);
  SymExpr out(VarContext::MN);
  for (const auto& [fs, c] : e.terms()) {
    FactorList mapped = fs;
    for (auto& f : mapped) {
      if (f.base == PsiBase::MN) {
        f.base = PsiBase::N;
      } else if (f.base == PsiBase::NMinusM) {
        f.base = PsiBase::N;
        f.offset -= 1;
      }
    }
    normalize_factors(mapped);
    out.add_term(mapped, c.substitute({one, n}));
  }
  return canonicalize(out);
}

bool expr_equal(const SymExpr& a, const SymExpr& b) {
  if (a.context() != b.context()) return false;
  return (canonicalize(a) - canonicalize(b)).is_zero();
}

SymExpr terms_with_order(const SymExpr& e, std::uint32_t order) {
  SymExpr out(e.context());
  for (const auto& [fs, c] : e.terms()) {
    if (std::any_of(fs.begin(), fs.end(), [&](const PsiFactor& f) { return f.order == order; })) {
      out.add_term(fs, c);
    }
  }
  return out;
}

std::vector<std::pair<FactorList, RationalFunction>> ordered_terms(const SymExpr& e) {
  std::vector<std::pair<FactorList, RationalFunction>> v(e.terms().begin(), e.terms().end());
  auto maxo = [](const FactorList& fs) {
    int m = -1;
    for (const auto& f : fs) m = std::max(m, static_cast<int>(f.order));
    return m;
  };
  std::stable_sort(v.begin(), v.end(), [&](const auto& x, const auto& y) {
    const int ox = maxo(x.first), oy = maxo(y.first);
    if (ox != oy) return ox > oy;
    if (FactorListLess{}(x.first, y.first)) return true;
    if (FactorListLess{}(y.first, x.first)) return false;
    return RationalFunction::compare(x.second, y.second) < 0;
  });
  return v;
}

}  // namespace entcum
