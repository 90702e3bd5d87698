#pragma once

#include <mpfr.h>

#include <string>

#include "entcum/polynomial.hpp"

namespace entcum {

/// MPFR number carrying its own precision, set in decimal digits.
/// Binary results take the larger operand precision; every primitive is
/// correctly rounded (round-to-nearest).
class BigFloat {
 public:
  static constexpr unsigned kDefaultDigits = 50;
  static constexpr unsigned kMaxDigits = 10000;

  explicit BigFloat(unsigned digits = kDefaultDigits);
  BigFloat(long v, unsigned digits);
  BigFloat(const Rational& q, unsigned digits);
  BigFloat(const BigFloat& o);
  BigFloat(BigFloat&& o) noexcept;
  BigFloat& operator=(const BigFloat& o);
  BigFloat& operator=(BigFloat&& o) noexcept;
  ~BigFloat();

  static BigFloat pi(unsigned digits);
  static BigFloat euler_gamma(unsigned digits);
  static BigFloat log(const BigFloat& x);
  static BigFloat log2(unsigned digits);

  unsigned digits() const { return digits_; }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  BigFloat operator-() const;
  BigFloat& operator+=(const BigFloat& o);
  BigFloat& operator-=(const BigFloat& o);
  BigFloat& operator*=(const BigFloat& o);
  BigFloat& operator/=(const BigFloat& o);
  friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
  friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
  friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
  friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }

  BigFloat pow(unsigned long e) const;
  /// Same value rounded to another precision.
  BigFloat rounded(unsigned digits) const;
  BigFloat abs() const;
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  /// floor(log10 |x|), meaningless for zero.
  long exponent10() const;
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  friend int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return compare(a, b) < 0; }

  /// `sig` significant digits, positional notation unless the exponent is
  /// extreme. Exact zero prints as "0".
  std::string to_string(unsigned sig) const;
  std::string to_string() const { return to_string(digits_); }

 private:
  void set_precision(unsigned digits);
  unsigned digits_;
  mpfr_t v_;
};

/// Bits used for a decimal precision (plus guard bits).
mpfr_prec_t digits_to_bits(unsigned digits);

}  // namespace entcum
