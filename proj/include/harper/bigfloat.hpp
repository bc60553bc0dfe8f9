#pragma once

#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

#include "harper/errors.hpp"

namespace harper {

// Thin RAII wrapper over mpfr_t. Binary operations compute at the larger of
// the two operand precisions.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 64) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  BigFloat(double x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
  BigFloat(const BigFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigFloat(BigFloat&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) { mpfr_set_prec(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  static BigFloat pi(mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

  BigFloat operator+(const BigFloat& o) const { return bin(o, mpfr_add); }
  BigFloat operator-(const BigFloat& o) const { return bin(o, mpfr_sub); }
  BigFloat operator*(const BigFloat& o) const { return bin(o, mpfr_mul); }
  BigFloat operator/(const BigFloat& o) const { return bin(o, mpfr_div); }
  BigFloat operator-() const {
    BigFloat r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  BigFloat& operator+=(const BigFloat& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator-=(const BigFloat& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator*=(const BigFloat& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend BigFloat sqrt(const BigFloat& x) {
    BigFloat r(x.precision());
    mpfr_sqrt(r.v_, x.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat abs(const BigFloat& x) {
    BigFloat r(x.precision());
    mpfr_abs(r.v_, x.v_, MPFR_RNDN);
    return r;
  }
  friend BigFloat cos(const BigFloat& x) {
    BigFloat r(x.precision());
    mpfr_cos(r.v_, x.v_, MPFR_RNDN);
    return r;
  }

  // x * 2^e, exact
  BigFloat ldexp(long e) const {
    BigFloat r(precision());
    mpfr_mul_2si(r.v_, v_, e, MPFR_RNDN);
    return r;
  }

  bool operator<(const BigFloat& o) const { return mpfr_cmp(v_, o.v_) < 0; }
  bool operator>(const BigFloat& o) const { return mpfr_cmp(v_, o.v_) > 0; }
  bool is_zero() const { return mpfr_zero_p(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // log2 |x|, -inf clamped
  double log2_abs() const {
    if (mpfr_zero_p(v_)) return -1e9;
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_abs(t, v_, MPFR_RNDN);
    mpfr_log2(t, t, MPFR_RNDN);
    const double r = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    return r;
  }

  std::string hex_string() const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%Ra", v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

 private:
  using MpfrBin = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
  BigFloat bin(const BigFloat& o, MpfrBin f) const {
    BigFloat r(std::max(precision(), o.precision()));
    f(r.v_, v_, o.v_, MPFR_RNDN);
    return r;
  }
  mpfr_t v_;
};

struct BigComplex {
  BigFloat re, im;

  explicit BigComplex(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
  BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}

  BigComplex operator+(const BigComplex& o) const { return {re + o.re, im + o.im}; }
  BigComplex operator-(const BigComplex& o) const { return {re - o.re, im - o.im}; }
  BigComplex operator*(const BigComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  BigComplex conj() const { return {re, -im}; }
  BigFloat abs2() const { return re * re + im * im; }
  BigComplex operator/(const BigComplex& o) const {
    const BigFloat d = o.abs2();
    const BigComplex n = *this * o.conj();
    return {n.re / d, n.im / d};
  }
};

}  // namespace harper
