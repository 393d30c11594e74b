#pragma once

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

namespace splh {

/// Arbitrary-precision real number backed by MPFR.
///
/// Every value carries its own mantissa precision in bits; binary operations
/// round to the wider of the two operand precisions (MPFR_RNDN throughout).
/// Precision is always explicit at construction: there is no default
/// precision and no global state.
class Real {
 public:
  explicit Real(mpfr_prec_t prec) {
    mpfr_init2(x_, prec);
    mpfr_set_zero(x_, +1);
  }
  Real(double v, mpfr_prec_t prec) {
    mpfr_init2(x_, prec);
    mpfr_set_d(x_, v, MPFR_RNDN);
  }
  Real(long v, mpfr_prec_t prec) {
    mpfr_init2(x_, prec);
    mpfr_set_si(x_, v, MPFR_RNDN);
  }
  Real(const Real& o) {
    mpfr_init2(x_, mpfr_get_prec(o.x_));
    mpfr_set(x_, o.x_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(x_, MPFR_PREC_MIN);
    mpfr_swap(x_, o.x_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(x_, mpfr_get_prec(o.x_));
      mpfr_set(x_, o.x_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(x_, o.x_);
    return *this;
  }
  ~Real() { mpfr_clear(x_); }

  /// Parse a decimal string at the given precision. Throws std::invalid_argument.
  static Real from_string(const std::string& s, mpfr_prec_t prec);

  /// 2^e at minimal storage.
  static Real pow2(long e, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_ui_2exp(r.x_, 1, e, MPFR_RNDN);
    return r;
  }

  static Real pi(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_pi(r.x_, MPFR_RNDN);
    return r;
  }

  mpfr_prec_t prec() const { return mpfr_get_prec(x_); }
  mpfr_ptr raw() { return x_; }
  mpfr_srcptr raw() const { return x_; }

  double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(x_, MPFR_RNDN); }
  bool is_finite() const { return mpfr_number_p(x_) != 0; }
  bool is_zero() const { return mpfr_zero_p(x_) != 0; }
  int sign() const { return mpfr_sgn(x_); }

  /// Normalized scientific decimal form with exactly `digits` significant
  /// digits, e.g. "-2.7973176363e-1". Pure function of (value, digits).
  std::string to_string(std::size_t digits) const;

  Real& operator+=(const Real& o) { mpfr_add(x_, x_, o.x_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(x_, x_, o.x_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(x_, x_, o.x_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(x_, x_, o.x_, MPFR_RNDN); return *this; }
  Real& operator+=(long v) { mpfr_add_si(x_, x_, v, MPFR_RNDN); return *this; }
  Real& operator-=(long v) { mpfr_sub_si(x_, x_, v, MPFR_RNDN); return *this; }
  Real& operator*=(long v) { mpfr_mul_si(x_, x_, v, MPFR_RNDN); return *this; }
  Real& operator/=(long v) { mpfr_div_si(x_, x_, v, MPFR_RNDN); return *this; }

  /// this += a*b without a temporary (fused multiply-add).
  void add_product(const Real& a, const Real& b) { mpfr_fma(x_, a.x_, b.x_, x_, MPFR_RNDN); }
  /// this -= a*b without a temporary.
  void sub_product(const Real& a, const Real& b) {
    mpfr_fms(x_, a.x_, b.x_, x_, MPFR_RNDN);
    mpfr_neg(x_, x_, MPFR_RNDN);
  }

  friend Real operator+(const Real& a, const Real& b) { return bin(mpfr_add, a, b); }
  friend Real operator-(const Real& a, const Real& b) { return bin(mpfr_sub, a, b); }
  friend Real operator*(const Real& a, const Real& b) { return bin(mpfr_mul, a, b); }
  friend Real operator/(const Real& a, const Real& b) { return bin(mpfr_div, a, b); }

  friend Real operator+(const Real& a, long b) { Real r(a); mpfr_add_si(r.x_, r.x_, b, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a, long b) { Real r(a); mpfr_sub_si(r.x_, r.x_, b, MPFR_RNDN); return r; }
  friend Real operator*(const Real& a, long b) { Real r(a); mpfr_mul_si(r.x_, r.x_, b, MPFR_RNDN); return r; }
  friend Real operator/(const Real& a, long b) { Real r(a); mpfr_div_si(r.x_, r.x_, b, MPFR_RNDN); return r; }
  friend Real operator+(long a, const Real& b) { return b + a; }
  friend Real operator*(long a, const Real& b) { return b * a; }
  friend Real operator-(long a, const Real& b) { Real r(b.prec()); mpfr_si_sub(r.x_, a, b.x_, MPFR_RNDN); return r; }
  friend Real operator/(long a, const Real& b) { Real r(b.prec()); mpfr_si_div(r.x_, a, b.x_, MPFR_RNDN); return r; }

  friend Real operator-(const Real& a) { Real r(a); mpfr_neg(r.x_, r.x_, MPFR_RNDN); return r; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.x_, b.x_) < 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.x_, b.x_) > 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.x_, b.x_) <= 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.x_, b.x_) >= 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.x_, b.x_) == 0; }
  friend bool operator!=(const Real& a, const Real& b) { return mpfr_cmp(a.x_, b.x_) != 0; }

  friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.x_, b) < 0; }
  friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.x_, b) > 0; }
  friend bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.x_, b) <= 0; }
  friend bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.x_, b) >= 0; }
  friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.x_, b) == 0; }

  friend Real sqrt(const Real& a) { return un(mpfr_sqrt, a); }
  friend Real cbrt(const Real& a) { return un(mpfr_cbrt, a); }
  friend Real exp(const Real& a) { return un(mpfr_exp, a); }
  friend Real log(const Real& a) { return un(mpfr_log, a); }
  friend Real sin(const Real& a) { return un(mpfr_sin, a); }
  friend Real cos(const Real& a) { return un(mpfr_cos, a); }
  friend Real sinh(const Real& a) { return un(mpfr_sinh, a); }
  friend Real cosh(const Real& a) { return un(mpfr_cosh, a); }
  friend Real asinh(const Real& a) { return un(mpfr_asinh, a); }
  friend Real abs(const Real& a) { Real r(a); mpfr_abs(r.x_, r.x_, MPFR_RNDN); return r; }
  friend Real gamma(const Real& a) { return un(mpfr_gamma, a); }

  friend Real pow(const Real& a, const Real& b) { return bin(mpfr_pow, a, b); }
  friend Real pow(const Real& a, long b) { Real r(a.prec()); mpfr_pow_si(r.x_, a.x_, b, MPFR_RNDN); return r; }

  /// a * 2^e (exact).
  friend Real ldexp2(const Real& a, long e) { Real r(a); mpfr_mul_2si(r.x_, r.x_, e, MPFR_RNDN); return r; }

  friend Real min(const Real& a, const Real& b) { return a <= b ? a : b; }
  friend Real max(const Real& a, const Real& b) { return a >= b ? a : b; }

  friend void sin_cos(Real& s, Real& c, const Real& a) {
    mpfr_sin_cos(s.x_, c.x_, a.x_, MPFR_RNDN);
  }
  friend void sinh_cosh(Real& s, Real& c, const Real& a) {
    mpfr_sinh_cosh(s.x_, c.x_, a.x_, MPFR_RNDN);
  }

 private:
  using BinOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
  using UnOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);
  static Real bin(BinOp op, const Real& a, const Real& b) {
    Real r(std::max(mpfr_get_prec(a.x_), mpfr_get_prec(b.x_)));
    op(r.x_, a.x_, b.x_, MPFR_RNDN);
    return r;
  }
  static Real un(UnOp op, const Real& a) {
    Real r(mpfr_get_prec(a.x_));
    op(r.x_, a.x_, MPFR_RNDN);
    return r;
  }

  mpfr_t x_;
};

/// Significant decimal digits carried by serialized values at `bits` precision.
inline std::size_t decimal_digits_for_bits(long bits) {
  return static_cast<std::size_t>((bits * 302 + 999) / 1000);
}

}  // namespace splh
