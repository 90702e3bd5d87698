#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "entcum/rational_function.hpp"

namespace entcum {

/// Admissible polygamma arguments. The first two live in {m, alpha}, the
/// rest in {m, n}.
enum class PsiBase : std::uint8_t { MPlusAlpha, Alpha, MN, N, NMinusM };

VarContext base_context(PsiBase b);
/// The base as a polynomial in its context.
Polynomial base_polynomial(PsiBase b);
/// "m+alpha", "alpha", "mn", "n", "n-m".
std::string_view base_name(PsiBase b);
std::optional<PsiBase> base_from_name(std::string_view s);

/// psi_order(base + offset)^power. Canonical factors have offset 0.
struct PsiFactor {
  std::uint32_t order = 0;
  PsiBase base = PsiBase::MPlusAlpha;
  std::int32_t offset = 0;
  std::uint32_t power = 1;

  friend bool operator==(const PsiFactor&, const PsiFactor&) = default;
};

/// Sorted by (order, base, offset); no two entries share that triple.
using FactorList = std::vector<PsiFactor>;

struct FactorListLess {
  bool operator()(const FactorList& a, const FactorList& b) const;
};

/// Finite sum of rational-function coefficients times products of
/// polygamma factors. Terms are merged eagerly and zero terms dropped.
class SymExpr {
 public:
  using TermMap = std::map<FactorList, RationalFunction, FactorListLess>;

  explicit SymExpr(VarContext ctx = VarContext::MAlpha) : ctx_(ctx) {}
  SymExpr(const RationalFunction& c);  // NOLINT: pure rational terms embed
  SymExpr(const Polynomial& p);        // NOLINT

  static SymExpr constant(VarContext ctx, const Rational& c);
  static SymExpr psi(std::uint32_t order, PsiBase base, std::int32_t offset = 0, std::uint32_t power = 1);
  static SymExpr term(const RationalFunction& coeff, FactorList factors);

  VarContext context() const { return ctx_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  /// True when no polygamma factor occurs.
  bool is_rational() const;
  /// The pure rational part (coefficient of the empty factor list).
  RationalFunction rational_part() const;
  /// All factors have offset 0.
  bool is_canonical() const;
  /// Largest polygamma order present, or -1 for a rational expression.
  int max_order() const;
  bool uses_base(PsiBase b) const;

  SymExpr operator-() const;
  SymExpr& operator+=(const SymExpr& rhs);
  SymExpr& operator-=(const SymExpr& rhs);
  SymExpr& operator*=(const SymExpr& rhs);
  SymExpr& operator*=(const RationalFunction& c);
  SymExpr& operator*=(const Rational& c);

  friend SymExpr operator+(SymExpr a, const SymExpr& b) { return a += b; }
  friend SymExpr operator-(SymExpr a, const SymExpr& b) { return a -= b; }
  friend SymExpr operator*(const SymExpr& a, const SymExpr& b);
  friend SymExpr operator*(SymExpr a, const RationalFunction& c) { return a *= c; }
  friend SymExpr operator*(SymExpr a, const Rational& c) { return a *= c; }
  friend SymExpr operator*(SymExpr a, long c) { return a *= Rational(c); }

  SymExpr pow(unsigned e) const;

  /// Adds coeff * factors into this expression.
  void add_term(const FactorList& factors, const RationalFunction& coeff);

 private:
  VarContext ctx_;
  TermMap terms_;
};

/// Removes every argument offset with the polygamma shift recurrence.
SymExpr canonicalize(const SymExpr& e);

/// m -> m + direction (direction is +1 or -1), then canonicalize.
SymExpr shift_m(const SymExpr& e, int direction);

/// d/d alpha, product rule through coefficients and polygamma factors.
SymExpr ddalpha(const SymExpr& e);

/// alpha := n - m; bases m+alpha -> n and alpha -> n-m.
SymExpr substitute_alpha(const SymExpr& e);

/// m := 1 in an {m, n} expression: mn -> n and n-m -> n-1.
SymExpr specialize_m_one(const SymExpr& e);

/// Equality after canonicalizing both sides.
bool expr_equal(const SymExpr& a, const SymExpr& b);

/// Terms containing at least one factor of the given polygamma order.
SymExpr terms_with_order(const SymExpr& e, std::uint32_t order);

enum class Format { Latex, Json, Text };

std::string emit(const SymExpr& e, Format fmt);
std::string to_latex(const SymExpr& e);
std::string to_text(const SymExpr& e);
std::string to_json(const SymExpr& e);

/// Inverse of to_json; throws ParseError.
SymExpr from_json(std::string_view json);

/// Parses the text format: sums and products of polynomials in the context
/// variables and psi_k(base + c) factors, with optional named definitions
/// ("a1 = ...") referenced later. Implicit multiplication is allowed, so
/// "3m^2n" and "(mn+1)(mn+2)" work. A line starting with + - * / continues
/// the previous one; '#' starts a comment. The value of the last statement
/// is returned.
SymExpr parse_expr(std::string_view text, VarContext ctx);

/// Deterministic term order used by every emitter: max order descending,
/// then factor list, then coefficient.
std::vector<std::pair<FactorList, RationalFunction>> ordered_terms(const SymExpr& e);

inline std::ostream& operator<<(std::ostream& os, const SymExpr& e) { return os << to_text(e); }

}  // namespace entcum
