#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>

#include "harper/errors.hpp"

namespace harper {

// An exact angle p/q of a full turn, i.e. the unit complex e^{2 pi i p / q}.
// Canonical form: 0 <= p < q, gcd(p, q) = 1, q >= 1. Products of rational
// multiplier values stay in this form, which is what makes the rational-sigma
// pathway (extension groups, root-of-unity traces) exact.
class RationalAngle {
 public:
  RationalAngle() : num_(0), den_(1) {}
  RationalAngle(std::int64_t num, std::int64_t den) { reduce(num, den); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }

  RationalAngle operator+(const RationalAngle& o) const {
    __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
    __int128 d = static_cast<__int128>(den_) * o.den_;
    return from128(n, d);
  }
  RationalAngle operator-() const { return RationalAngle(-num_, den_); }
  RationalAngle operator-(const RationalAngle& o) const { return *this + (-o); }

  // Integer scaling (phase of a power).
  RationalAngle times(std::int64_t k) const {
    return from128(static_cast<__int128>(num_) * k, den_);
  }

  RationalAngle conj() const { return -*this; }

  bool operator==(const RationalAngle& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RationalAngle& o) const { return !(*this == o); }

  double radians() const { return 2.0 * M_PI * static_cast<double>(num_) / static_cast<double>(den_); }

  // Exact values for the small denominators that show up constantly
  // (so e.g. flux-1/2 operators come out with entries exactly +-1).
  std::complex<double> value() const {
    if (den_ == 1) return {1.0, 0.0};
    if (den_ == 2) return {-1.0, 0.0};
    if (den_ == 4) return num_ == 1 ? std::complex<double>(0.0, 1.0) : std::complex<double>(0.0, -1.0);
    return {std::cos(radians()), std::sin(radians())};
  }

 private:
  static RationalAngle from128(__int128 n, __int128 d) {
    // reduce before narrowing
    if (d < 0) { n = -n; d = -d; }
    __int128 m = n % d;
    if (m < 0) m += d;
    __int128 g = gcd128(m, d);
    m /= g; d /= g;
    if (d > INT64_MAX) throw resource_error("RationalAngle: denominator overflow");
    RationalAngle r;
    r.num_ = static_cast<std::int64_t>(m);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    return a == 0 ? 1 : a;
  }
  void reduce(std::int64_t num, std::int64_t den) {
    if (den == 0) throw domain_error("RationalAngle: zero denominator");
    auto r = from128(num, den);
    num_ = r.num_;
    den_ = r.den_;
  }

  std::int64_t num_;
  std::int64_t den_;  // q >= 1, 0 <= num_ < den_, coprime
};

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  return a / std::gcd(a, b) * b;
}

}  // namespace harper
