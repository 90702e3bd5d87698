#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "entcum/polynomial.hpp"

namespace entcum {

/// Exact quotient of polynomials. The denominator is stored as a product of
/// normalized factors (primitive, integer coefficients, positive leading
/// coefficient); all rational content lives in the numerator. After every
/// operation the numerator is trial-divided by each denominator factor, so
/// fractions whose denominators are built from irreducible pieces come out
/// fully reduced. Equality never depends on that: it cross-multiplies.
class RationalFunction {
 public:
  struct Factor {
    Polynomial poly;
    unsigned mult = 1;
  };

  explicit RationalFunction(VarContext ctx = VarContext::MAlpha) : num_(ctx) {}
  RationalFunction(Polynomial num);  // NOLINT: polynomials embed implicitly

  static RationalFunction constant(VarContext ctx, const Rational& c);
  static RationalFunction variable(VarContext ctx, std::size_t index);
  /// num / den; den is split into content, monomial and remaining factor.
  static RationalFunction fraction(const Polynomial& num, const Polynomial& den);
  /// 1 / p^e with p kept as a single denominator factor (after content and
  /// monomial extraction).
  static RationalFunction reciprocal(const Polynomial& p, unsigned e = 1);
  /// Rebuild from stored parts (used by deserialization).
  static RationalFunction from_factors(Polynomial num, std::vector<Factor> factors);

  VarContext context() const { return num_.context(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }
  bool is_constant() const { return den_.empty() && num_.is_constant(); }
  bool is_one() const;

  /// Numerator as stored (rational coefficients).
  const Polynomial& raw_numerator() const { return num_; }
  const std::vector<Factor>& denominator_factors() const { return den_; }

  /// Canonical expanded pair: integer coefficients, no common rational
  /// content, denominator with positive leading coefficient.
  Polynomial numerator() const;
  Polynomial denominator() const;

  RationalFunction operator-() const;
  RationalFunction& operator+=(const RationalFunction& rhs);
  RationalFunction& operator-=(const RationalFunction& rhs);
  RationalFunction& operator*=(const RationalFunction& rhs);
  RationalFunction& operator/=(const RationalFunction& rhs);
  RationalFunction& operator*=(const Rational& c);

  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
  friend RationalFunction operator*(RationalFunction a, const Rational& c) { return a *= c; }

  /// Exact equality by cross-multiplication.
  friend bool operator==(const RationalFunction& a, const RationalFunction& b);

  /// Deterministic total order on stored representation.
  static int compare(const RationalFunction& a, const RationalFunction& b);

  /// Throws PoleError when the denominator vanishes.
  Rational evaluate(std::span<const Rational, kNumVars> point) const;

  RationalFunction substitute(const std::array<Polynomial, kNumVars>& images) const;
  RationalFunction derivative(std::size_t var) const;
  RationalFunction pow(unsigned e) const;

  /// Re-runs normalization and reduction; a no-op on values produced by the
  /// public operations.
  RationalFunction canonicalized() const;

  std::string to_string(Polynomial::Style style = Polynomial::Style::Text) const;

 private:
  void add_denominator(const Polynomial& p, unsigned mult);
  void sort_factors();
  void reduce();

  Polynomial num_;
  std::vector<Factor> den_;
};

inline std::ostream& operator<<(std::ostream& os, const RationalFunction& f) {
  return os << f.to_string();
}

/// Applies alpha := n - m, taking a {m, alpha} value into {m, n}.
RationalFunction substitute_alpha(const RationalFunction& f);
Polynomial substitute_alpha(const Polynomial& p);

}  // namespace entcum
