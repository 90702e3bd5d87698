#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "entcum/context.hpp"

namespace entcum {

using Rational = mpq_class;

/// Exponent vector, one entry per context variable.
struct Monomial {
  std::array<std::uint32_t, kNumVars> exp{};

  std::uint32_t total_degree() const { return exp[0] + exp[1]; }
  bool divides(const Monomial& other) const {
    return exp[0] <= other.exp[0] && exp[1] <= other.exp[1];
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded lexicographic order with variables ranked as declared (m first).
std::strong_ordering grlex(const Monomial& a, const Monomial& b);

/// Sparse multivariate polynomial with exact rational coefficients. Terms are
/// kept in descending graded-lex order with no zero coefficients stored.
class Polynomial {
 public:
  struct Term {
    Monomial mono;
    Rational coeff;
  };

  enum class Style { Text, Latex };

  explicit Polynomial(VarContext ctx = VarContext::MAlpha) : ctx_(ctx) {}

  static Polynomial constant(VarContext ctx, const Rational& c);
  static Polynomial variable(VarContext ctx, std::size_t index);
  /// Builds from arbitrary terms: sorts, merges duplicates and drops zeros.
  static Polynomial from_terms(VarContext ctx, std::vector<Term> terms);

  VarContext context() const { return ctx_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term value (0 if absent).
  Rational constant_value() const;
  const Term& leading_term() const { return terms_.front(); }
  std::uint32_t total_degree() const;
  std::uint32_t degree_in(std::size_t var) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(const Polynomial& rhs);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }

  friend bool operator==(const Polynomial& a, const Polynomial& b);

  /// Total order used for deterministic sorting (degree, then terms).
  static int compare(const Polynomial& a, const Polynomial& b);

  Rational evaluate(std::span<const Rational, kNumVars> point) const;

  /// Replaces each variable by the polynomial at the same index; the images
  /// share a (possibly different) target context.
  Polynomial substitute(const std::array<Polynomial, kNumVars>& images) const;

  Polynomial derivative(std::size_t var) const;

  Polynomial pow(unsigned e) const;

  /// Quotient if `divisor` divides this polynomial exactly, otherwise nullopt.
  std::optional<Polynomial> divide_exact(const Polynomial& divisor) const;

  /// Rational c with the sign of the leading coefficient such that this / c
  /// has coprime integer coefficients. Zero polynomial yields 0.
  Rational content() const;

  /// Largest monomial dividing every term.
  Monomial monomial_content() const;
  Polynomial divide_monomial(const Monomial& mono) const;

  std::string to_string(Style style = Style::Text) const;

 private:
  void require_context(const Polynomial& other, std::string_view op) const;

  VarContext ctx_;
  std::vector<Term> terms_;
};

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

/// Canonical string for a rational: "p" or "p/q".
std::string rational_to_string(const Rational& q);
/// Parses "p" or "p/q" (optional sign); throws ParseError.
Rational parse_rational(std::string_view s);

}  // namespace entcum
