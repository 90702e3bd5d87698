#include "entcum/engine.hpp"

#include <charconv>

#include "entcum/combinat.hpp"
#include "entcum/errors.hpp"

namespace entcum {

namespace {

constexpr auto kT = VarContext::MAlpha;

Polynomial m_poly() { return Polynomial::variable(kT, kVarM); }
Polynomial alpha_poly() { return Polynomial::variable(kT, kVarSecond); }
Polynomial two_m_alpha() { return m_poly() * Rational(2) + alpha_poly(); }

SymExpr shift_difference(const SymExpr& e) { return shift_m(e, 1) - shift_m(e, -1); }

long falling(unsigned n, unsigned i) {  // n!/(n-i)!
  long r = 1;
  for (unsigned j = 0; j < i; ++j) r *= static_cast<long>(n - j);
  return r;
}

long binom(unsigned n, unsigned k) {
  long r = 1;
  for (unsigned j = 1; j <= k; ++j) r = r * static_cast<long>(n - k + j) / static_cast<long>(j);
  return r;
}

constexpr unsigned kMaxDepth = 256;

}  // namespace

std::string key_name(const CumulantKey& key) {
  return std::string(key.kind == StatKind::TK ? "TK" : "RK") + "_" + std::to_string(key.k) + "_" +
         std::to_string(key.l);
}

std::optional<CumulantKey> parse_key_name(std::string_view name) {
  if (name.size() < 6 || name[2] != '_') return std::nullopt;
  CumulantKey key;
  if (name.substr(0, 2) == "TK")
    key.kind = StatKind::TK;
  else if (name.substr(0, 2) == "RK")
    key.kind = StatKind::RK;
  else
    return std::nullopt;
  const auto rest = name.substr(3);
  const auto us = rest.find('_');
  if (us == std::string_view::npos) return std::nullopt;
  auto parse = [](std::string_view s, unsigned& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size() && !s.empty();
  };
  if (!parse(rest.substr(0, us), key.k) || !parse(rest.substr(us + 1), key.l) || key.l == 0) return std::nullopt;
  return key;
}

SymExpr kappa_R1() { return SymExpr(m_poly() * (m_poly() + alpha_poly())); }

SymExpr mean_R(unsigned k) {
  SymExpr r(m_poly());
  const SymExpr kr = kappa_R1();
  const SymExpr b(two_m_alpha());
  for (unsigned j = 1; j <= k; ++j) {
    SymExpr next = b * r * static_cast<long>(j - 1) + kr * shift_difference(r);
    r = next * Rational(1, j + 1);
  }
  return r;
}

SymExpr mean_R_alt(unsigned k) {
  if (k < 2) throw DomainError("mean_R_alt needs k >= 2");
  const Polynomial b = two_m_alpha();
  const Polynomial a2 = alpha_poly() * alpha_poly();
  Polynomial prev = m_poly();
  Polynomial cur = m_poly() * (m_poly() + alpha_poly());
  for (unsigned j = 2; j <= k; ++j) {
    const long jm1 = static_cast<long>(j) - 1;
    Polynomial next = b * cur * Rational(2 * static_cast<long>(j) - 1) +
                      (Polynomial::constant(kT, Rational(jm1 * jm1)) - a2) * prev * Rational(jm1 - 1);
    next *= Rational(1, j + 1);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return SymExpr(cur);
}

SymExpr mean_T(unsigned k) {
  const Polynomial z = m_poly() + alpha_poly();
  SymExpr t = SymExpr(z) * SymExpr::psi(0, PsiBase::MPlusAlpha) -
              SymExpr(alpha_poly()) * SymExpr::psi(0, PsiBase::Alpha) - SymExpr(m_poly());
  const SymExpr kr = kappa_R1();
  const SymExpr b(two_m_alpha());
  SymExpr r_prev(m_poly());
  for (unsigned j = 1; j <= k; ++j) {
    SymExpr r = b * r_prev * static_cast<long>(j - 1) + kr * shift_difference(r_prev);
    r = r * Rational(1, j + 1);
    SymExpr next = b * t * static_cast<long>(j - 1) + kr * shift_difference(t) - r + b * r_prev;
    t = next * Rational(1, j + 1);
    r_prev = std::move(r);
  }
  return t;
}

Engine::Engine(std::optional<std::filesystem::path> cache_dir) : cache_dir_(std::move(cache_dir)) {
  if (cache_dir_) std::filesystem::create_directories(*cache_dir_);
}

const SymExpr& Engine::joint_cumulant(const CumulantKey& key) {
  if (key.l == 0) throw DomainError("cumulant order must be positive");
  if (auto it = store_.find(key); it != store_.end()) return it->second;
  if (auto cached = load(key)) {
    ++stats_.cache_hits;
    return store_.emplace(key, std::move(*cached)).first->second;
  }
  struct DepthGuard {
    unsigned& d;
    ~DepthGuard() { --d; }
  } guard{++depth_};
  if (depth_ > kMaxDepth) throw InvariantViolation("joint cumulant recursion too deep at " + key_name(key));
  SymExpr e = compute(key);
  if (e.context() != kT) throw InvariantViolation("joint cumulant left the {m,alpha} context: " + key_name(key));
  if (!e.is_canonical()) e = canonicalize(e);
  ++stats_.computed;
  save(key, e);
  return store_.emplace(key, std::move(e)).first->second;
}

SymExpr Engine::compute(const CumulantKey& key) {
  const auto [kind, k, l] = key;
  if (l == 1) return kind == StatKind::TK ? mean_T(k) : mean_R(k);
  if (kind == StatKind::TK) {
    if (k == 0) return ddalpha(joint_cumulant({StatKind::TK, 1, l - 1}));
    return delta_T(l, k) + ddalpha(joint_cumulant({StatKind::TK, k + 1, l - 1}));
  }
  if (k == 0) return SymExpr(kT);
  if (k == 1) return D_integral(StatKind::TK, 1, l - 1);
  return delta_R(l, k) + ddalpha(joint_cumulant({StatKind::RK, k + 1, l - 1})) - D_integral(StatKind::TK, k, l - 1);
}

SymExpr Engine::cumulant_T(unsigned l) {
  if (l == 0) throw DomainError("cumulant order must be positive");
  for (unsigned L = 2; L <= l; ++L) joint_cumulant({StatKind::TK, l - L + 1, L});
  SymExpr e = joint_cumulant({StatKind::TK, 1, l});
  for (const auto& [factors, coeff] : e.terms()) {
    if (!coeff.is_polynomial())
      throw InvariantViolation("kappa_" + std::to_string(l) + "(T) has a non-polynomial coefficient");
    for (const auto& f : factors)
      if (f.base != PsiBase::MPlusAlpha || f.offset != 0)
        throw InvariantViolation("kappa_" + std::to_string(l) + "(T) has a polygamma base other than m+alpha");
  }
  return e;
}

const SymExpr& Engine::shifted(const CumulantKey& key, int direction) {
  auto id = std::make_pair(key, direction);
  if (auto it = shifted_.find(id); it != shifted_.end()) return it->second;
  SymExpr s = shift_m(joint_cumulant(key), direction);
  return shifted_.emplace(id, std::move(s)).first->second;
}

// kappa^+ - kappa for direction +1, kappa^- - kappa for -1
SymExpr Engine::shifted_difference(const CumulantKey& key, int direction) {
  if (key.kind == StatKind::RK && key.k == 0) {
    // kappa(R_0) = m, higher orders vanish
    return key.l == 1 ? SymExpr::constant(kT, Rational(direction)) : SymExpr(kT);
  }
  return shifted(key, direction) - joint_cumulant(key);
}

SymExpr Engine::H_integral(StatKind kind, unsigned r, unsigned s) {
  auto id = std::make_tuple(1, kind, r, s);
  if (auto it = integrals_.find(id); it != integrals_.end()) return it->second;
  SymExpr sum(kT);
  for (const auto& [shape, count] : rooted_partition_shapes(s)) {
    SymExpr prod = shifted_difference({kind, r, shape.first}, 1);
    for (unsigned b : shape.second) {
      if (prod.is_zero()) break;
      prod = prod * shifted_difference({StatKind::TK, 1, b}, 1);
    }
    sum += prod * static_cast<long>(count);
  }
  integrals_.emplace(id, sum);
  return sum;
}

SymExpr Engine::h_integral(StatKind kind, unsigned r, unsigned s) {
  auto id = std::make_tuple(2, kind, r, s);
  if (auto it = integrals_.find(id); it != integrals_.end()) return it->second;
  SymExpr sum(kT);
  for (const auto& [shape, count] : rooted_partition_shapes(s)) {
    SymExpr prod = shifted_difference({kind, r, shape.first}, -1);
    for (unsigned b : shape.second) {
      if (prod.is_zero()) break;
      prod = prod * shifted_difference({StatKind::TK, 1, b}, -1);
    }
    sum -= prod * static_cast<long>(count);
  }
  integrals_.emplace(id, sum);
  return sum;
}

SymExpr Engine::D_integral(StatKind kind, unsigned k, unsigned l) {
  if (l == 0) throw DomainError("D integral order must be positive");
  auto id = std::make_tuple(3, kind, k, l);
  if (auto it = integrals_.find(id); it != integrals_.end()) return it->second;
  SymExpr sum(kT);
  for (unsigned i = 0; i < l; ++i) {
    const long f = falling(l - 1, i);
    const long w = static_cast<long>(k + l - 1 - i);
    if (w != 0) sum += joint_cumulant({kind, k, l - i}) * (f * w);
    if (kind == StatKind::TK) sum += joint_cumulant({StatKind::RK, k, l - i}) * f;
  }
  integrals_.emplace(id, sum);
  return sum;
}

SymExpr Engine::delta_T(unsigned l, unsigned k) {
  if (l < 2 || k < 1) throw DomainError("delta_T needs l >= 2 and k >= 1");
  const SymExpr kr = kappa_R1();
  SymExpr total(kT);
  for (unsigned s = 1; s < l; ++s) {
    SymExpr H(kT), D(kT);
    for (unsigned r = 0; r < k; ++r) {
      const unsigned q = k - r - 1;
      H += H_integral(StatKind::TK, r, s) * h_integral(StatKind::TK, q, l - s);
      D += D_integral(StatKind::TK, r, s) * D_integral(StatKind::TK, q, l - s);
    }
    total += (kr * H - D) * binom(l - 2, s - 1);
  }
  return total;
}

SymExpr Engine::delta_R(unsigned l, unsigned k) {
  if (l < 2 || k < 2) throw DomainError("delta_R needs l >= 2 and k >= 2");
  const SymExpr kr = kappa_R1();
  SymExpr total(kT);
  for (unsigned s = 1; s < l; ++s) {
    SymExpr H(kT), D(kT);
    for (unsigned r = 0; r < k; ++r) {
      const unsigned q = k - r - 1;
      H += H_integral(StatKind::RK, r, s) * h_integral(StatKind::TK, q, l - s);
      H += h_integral(StatKind::RK, r, s) * H_integral(StatKind::TK, q, l - s);
      D += D_integral(StatKind::RK, r, s) * D_integral(StatKind::TK, q, l - s);
    }
    total += (kr * H - D * 2L) * binom(l - 2, s - 1);
  }
  return total;
}

}  // namespace entcum
