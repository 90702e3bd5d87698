#include "entcum/convert.hpp"

#include "entcum/combinat.hpp"
#include "entcum/errors.hpp"

namespace entcum {

namespace {

constexpr auto kS = VarContext::MN;

Polynomial mn_plus(long i) {
  return Polynomial::variable(kS, kVarM) * Polynomial::variable(kS, kVarSecond) +
         Polynomial::constant(kS, Rational(i));
}

long binom(unsigned n, unsigned k) {
  long r = 1;
  for (unsigned j = 1; j <= k; ++j) r = r * static_cast<long>(n - k + j) / static_cast<long>(j);
  return r;
}

void require_no_n_minus_m(const SymExpr& e, unsigned l) {
  if (e.uses_base(PsiBase::NMinusM))
    throw InvariantViolation("kappa_" + std::to_string(l) + "(S) retains a psi(n-m) factor");
}

}  // namespace

RationalFunction inverse_pochhammer_mn(unsigned l) {
  RationalFunction r = RationalFunction::constant(kS, Rational(1));
  for (unsigned i = 0; i < l; ++i) r *= RationalFunction::reciprocal(mn_plus(i));
  return r;
}

SymExpr conversion_coefficient(unsigned j, unsigned l) {
  if (j >= l) throw DomainError("conversion_coefficient needs j < l");
  std::vector<SymExpr> z;
  for (unsigned i = 0; i < l - j; ++i) z.push_back(SymExpr::psi(i, PsiBase::MN, static_cast<std::int32_t>(l)));
  SymExpr b = bell_complete(std::span<const SymExpr>(z));
  const long sign = ((j + l + 1) % 2 == 0) ? 1 : -1;
  return canonicalize(b * (sign * binom(l, j)));
}

std::vector<SymExpr> moments_S(unsigned l, const std::vector<SymExpr>& kappa_T) {
  if (kappa_T.size() < l) throw DomainError("moments_S needs l cumulants of T");
  std::vector<SymExpr> k_mn;
  for (unsigned i = 0; i < l; ++i) k_mn.push_back(substitute_alpha(kappa_T[i]));
  const auto mu_T = moments_from_cumulants(k_mn);
  std::vector<SymExpr> mu_S;  // mu_S[i] = E[S^(i+1)]
  for (unsigned q = 1; q <= l; ++q) {
    SymExpr acc = mu_T[q - 1] * inverse_pochhammer_mn(q);
    if (q % 2 == 1) acc = -acc;
    acc += conversion_coefficient(0, q);
    for (unsigned j = 1; j < q; ++j) acc += conversion_coefficient(j, q) * mu_S[j - 1];
    mu_S.push_back(canonicalize(acc));
  }
  return mu_S;
}

std::vector<SymExpr> cumulants_S(unsigned l, const std::vector<SymExpr>& kappa_T) {
  auto k = cumulants_from_moments(moments_S(l, kappa_T));
  for (unsigned i = 0; i < k.size(); ++i) {
    k[i] = canonicalize(k[i]);
    require_no_n_minus_m(k[i], i + 1);
  }
  return k;
}

SymExpr cumulant_S(Engine& engine, unsigned l) {
  if (l == 0) throw DomainError("cumulant order must be positive");
  std::vector<SymExpr> kt;
  for (unsigned i = 1; i <= l; ++i) kt.push_back(engine.cumulant_T(i));
  return cumulants_S(l, kt).back();
}

SymExpr leading_term(unsigned l) {
  if (l < 2) throw DomainError("leading_term needs l >= 2");
  const std::uint32_t k = l - 1;
  SymExpr r = substitute_alpha(mean_R(l)) * inverse_pochhammer_mn(l);
  SymExpr e = SymExpr::psi(k, PsiBase::MN) - r * SymExpr::psi(k, PsiBase::N);
  return (l % 2 == 0) ? -e : e;
}

}  // namespace entcum
