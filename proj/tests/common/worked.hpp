#pragma once

#include <string>
#include <vector>

#include "entcum/engine.hpp"

namespace entcum::fixtures {

// Hand-expanded low-order decoupled terms, built from lower-order symbols.
struct WorkedCase {
  std::string name;
  SymExpr actual, expected;
};

inline std::vector<WorkedCase> worked_cases(Engine& e) {
  constexpr CumulantKey kT0{StatKind::TK, 0, 1};
  constexpr CumulantKey kT1{StatKind::TK, 1, 1};
  constexpr CumulantKey kTT0{StatKind::TK, 0, 2};   // kappa(T0, T)
  constexpr CumulantKey kTTT0{StatKind::TK, 0, 3};  // kappa(T0, T, T)
  constexpr CumulantKey kTT{StatKind::TK, 1, 2};
  constexpr CumulantKey kR0{StatKind::RK, 0, 1};
  constexpr CumulantKey kR1{StatKind::RK, 1, 1};
  constexpr CumulantKey kR2{StatKind::RK, 2, 1};
  constexpr CumulantKey kRT{StatKind::RK, 1, 2};  // kappa(R, T)
  constexpr CumulantKey kT2{StatKind::TK, 2, 1};

  // kappa, kappa^+ - kappa, kappa - kappa^-
  auto k = [&](CumulantKey key) { return e.joint_cumulant(key); };
  auto up = [&](CumulantKey key) { return e.shifted(key, 1) - e.joint_cumulant(key); };
  auto dn = [&](CumulantKey key) { return e.joint_cumulant(key) - e.shifted(key, -1); };

  std::vector<WorkedCase> out;

  const SymExpr d2 = k(kR1) * up(kT0) * dn(kT0) - k(kR0).pow(2);
  out.push_back({"delta_2(1)", e.delta_T(2, 1), d2});
  out.push_back({"kappa(T,T)", k(kTT), d2 + ddalpha(mean_T(2))});

  {
    const SymExpr H31 = (dn(kTT0) - dn(kT0) * dn(kT1)) * up(kT0);
    const SymExpr H32 = (up(kTT0) + up(kT0) * up(kT1)) * dn(kT0);
    const SymExpr D31 = k(kR0) * (k(kTT0) + k(kR0));
    out.push_back({"delta_3(1)", e.delta_T(3, 1), k(kR1) * H31 - D31 + k(kR1) * H32 - D31});
    out.push_back({"kappa(T0,T)", k(kTT0), ddalpha(k(kT1))});
  }
  {
    const SymExpr H41 =
        (dn(kTTT0) - dn(kT1) * dn(kTT0) * 2 - dn(kT0) * dn(kTT) + dn(kT0) * dn(kT1).pow(2)) * up(kT0);
    const SymExpr H42 = (dn(kTT0) - dn(kT0) * dn(kT1)) * (up(kTT0) + up(kT0) * up(kT1)) * 2;
    const SymExpr H43 =
        (up(kTTT0) + up(kT1) * up(kTT0) * 2 + up(kT0) * up(kTT) + up(kT0) * up(kT1).pow(2)) * dn(kT0);
    const SymExpr D41 = k(kR0) * (k(kTTT0) + k(kTT0) + k(kR0)) * 2;
    const SymExpr D42 = (k(kTT0) + k(kR0)).pow(2) * 2;
    out.push_back({"delta_4(1)", e.delta_T(4, 1), k(kR1) * (H41 + H42 + H43) - D41 - D42 - D41});
    out.push_back({"kappa(T0,T,T)", k(kTTT0), ddalpha(k(kTT))});
  }
  {
    const SymExpr dr22 =
        k(kR1) * (up(kR1) * dn(kT0) + dn(kR0) * up(kT1) + up(kR0) * dn(kT1) + dn(kR1) * up(kT0)) -
        k(kR0) * k(kR1) * 2;
    out.push_back({"delta_2^R(2)", e.delta_R(2, 2), dr22});
    out.push_back({"kappa(R2,T)", e.joint_cumulant({StatKind::RK, 2, 2}),
                   dr22 - e.D_integral(StatKind::TK, 2, 1) + ddalpha(mean_R(3))});
  }
  out.push_back({"delta_2^R(3)", e.delta_R(2, 3),
                 k(kR1) * (up(kR2) * dn(kT0) + dn(kR2) * up(kT0) + up(kR1) * dn(kT1) + dn(kR1) * up(kT1) +
                           up(kR0) * dn(kT2) + dn(kR0) * up(kT2) - k(kR1) * 2 - k(kT1) * 2) -
                     k(kR0) * k(kR2) * 4});
  {
    const SymExpr R = k(kR1), T = k(kT1), R0 = k(kR0);
    const SymExpr body = up(kR1) * (dn(kTT0) - dn(kT1) * dn(kT0)) + (dn(kTT) - dn(kT1).pow(2)) * up(kR0) +
                         up(kT0) * (R - e.shifted(kRT, -1) - dn(kR1) * dn(kT1) + T) +
                         dn(kT0) * (e.shifted(kRT, 1) - R - T + up(kR1) * up(kT1)) +
                         dn(kR0) * (up(kTT) + up(kT1).pow(2)) + (up(kTT0) + up(kT0) * up(kT1)) * dn(kR1) -
                         (k(kTT0) + R0) * 2;
    out.push_back({"delta_3^R(2)", e.delta_R(3, 2), R * body - R0 * (R * 3 + T * 2) * 2});
  }
  return out;
}

}  // namespace entcum::fixtures
