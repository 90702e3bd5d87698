#pragma once

#include <vector>

#include "entcum/engine.hpp"
#include "entcum/symexpr.hpp"

namespace entcum {

/// 1/(mn)_l as a product of linear denominator factors, in {m, n}.
RationalFunction inverse_pochhammer_mn(unsigned l);

/// A_j of the T -> S moment relation at order l, canonical in {m, n}.
SymExpr conversion_coefficient(unsigned j, unsigned l);

/// E[S^1..S^l] from kappa_1..kappa_l(T) given in {m, alpha}.
std::vector<SymExpr> moments_S(unsigned l, const std::vector<SymExpr>& kappa_T);

/// kappa_1..kappa_l(S) from kappa_1..kappa_l(T).
std::vector<SymExpr> cumulants_S(unsigned l, const std::vector<SymExpr>& kappa_T);

/// kappa_l(S) via the engine; throws InvariantViolation if a psi(n-m)
/// factor survives.
SymExpr cumulant_S(Engine& engine, unsigned l);

/// The highest-order polygamma terms of kappa_l(S) predicted from
/// kappa(R_l); l >= 2.
SymExpr leading_term(unsigned l);

}  // namespace entcum
