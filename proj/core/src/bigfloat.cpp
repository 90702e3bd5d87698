#include "entcum/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "entcum/errors.hpp"

namespace entcum {

mpfr_prec_t digits_to_bits(unsigned digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 16;
}

BigFloat::BigFloat(unsigned digits) : digits_(digits) {
  if (digits == 0 || digits > kMaxDigits) throw DomainError("precision out of range");
  mpfr_init2(v_, digits_to_bits(digits));
  mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(long v, unsigned digits) : BigFloat(digits) { mpfr_set_si(v_, v, MPFR_RNDN); }

BigFloat::BigFloat(const Rational& q, unsigned digits) : BigFloat(digits) {
  mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& o) : digits_(o.digits_) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& o) noexcept : BigFloat(o) {}

BigFloat& BigFloat::operator=(const BigFloat& o) {
  if (this != &o) {
    if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    digits_ = o.digits_;
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
  if (this != &o) {
    mpfr_swap(v_, o.v_);
    std::swap(digits_, o.digits_);
  }
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

void BigFloat::set_precision(unsigned digits) {
  if (digits <= digits_) return;
  mpfr_prec_round(v_, digits_to_bits(digits), MPFR_RNDN);
  digits_ = digits;
}

BigFloat BigFloat::pi(unsigned digits) {
  BigFloat r(digits);
  mpfr_const_pi(r.v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::euler_gamma(unsigned digits) {
  BigFloat r(digits);
  mpfr_const_euler(r.v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::log2(unsigned digits) {
  BigFloat r(digits);
  mpfr_const_log2(r.v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::log(const BigFloat& x) {
  if (x.sign() <= 0) throw DomainError("log of a non-positive number");
  BigFloat r(x.digits_);
  mpfr_log(r.v_, x.v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::operator-() const {
  BigFloat r(*this);
  mpfr_neg(r.v_, r.v_, MPFR_RNDN);
  return r;
}

BigFloat& BigFloat::operator+=(const BigFloat& o) {
  set_precision(o.digits_);
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator-=(const BigFloat& o) {
  set_precision(o.digits_);
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator*=(const BigFloat& o) {
  set_precision(o.digits_);
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator/=(const BigFloat& o) {
  if (o.is_zero()) throw DivisionByZero("BigFloat division by zero");
  set_precision(o.digits_);
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigFloat BigFloat::pow(unsigned long e) const {
  BigFloat r(digits_);
  mpfr_pow_ui(r.v_, v_, e, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::rounded(unsigned digits) const {
  BigFloat r(digits);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::abs() const {
  BigFloat r(*this);
  mpfr_abs(r.v_, r.v_, MPFR_RNDN);
  return r;
}

long BigFloat::exponent10() const {
  if (is_zero()) return 0;
  mpfr_t t;
  mpfr_init2(t, 64);
  mpfr_abs(t, v_, MPFR_RNDN);
  mpfr_log10(t, t, MPFR_RNDN);
  mpfr_floor(t, t);
  const long e = mpfr_get_si(t, MPFR_RNDN);
  mpfr_clear(t);
  return e;
}

std::string BigFloat::to_string(unsigned sig) const {
  if (is_zero()) return "0";
  if (!mpfr_number_p(v_)) return mpfr_nan_p(v_) ? "nan" : (sign() > 0 ? "inf" : "-inf");
  sig = std::max(1u, sig);
  mpfr_exp_t exp10 = 0;
  char* s = mpfr_get_str(nullptr, &exp10, 10, sig, v_, MPFR_RNDN);
  std::string digits(s);
  mpfr_free_str(s);
  std::string sign;
  if (digits[0] == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  // value = 0.digits * 10^exp10
  std::string out;
  if (exp10 > static_cast<mpfr_exp_t>(sig) + 20 || exp10 < -30) {
    out = digits.substr(0, 1) + (digits.size() > 1 ? "." + digits.substr(1) : "") + "e" + std::to_string(exp10 - 1);
  } else if (exp10 <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-exp10), '0') + digits;
  } else if (static_cast<std::size_t>(exp10) >= digits.size()) {
    out = digits + std::string(static_cast<std::size_t>(exp10) - digits.size(), '0');
  } else {
    out = digits.substr(0, static_cast<std::size_t>(exp10)) + "." + digits.substr(static_cast<std::size_t>(exp10));
  }
  return sign + out;
}

}  // namespace entcum
