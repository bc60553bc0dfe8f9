#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "harper/errors.hpp"
#include "harper/rational_angle.hpp"

namespace harper {

// The cyclotomic field Q(zeta_n), elements represented uniquely as
// polynomials in zeta of degree < phi(n), reduced modulo the n-th
// cyclotomic polynomial. Exact arithmetic via GMP rationals.
class CycloField {
 public:
  static std::shared_ptr<const CycloField> make(std::int64_t n);

  std::int64_t conductor() const { return n_; }
  int degree() const { return deg_; }
  const std::vector<mpz_class>& cyclotomic_poly() const { return phi_; }
  // zeta^k reduced, k in [0, n)
  const std::vector<mpq_class>& zeta_power(std::int64_t k) const;

 private:
  std::int64_t n_ = 1;
  int deg_ = 1;
  std::vector<mpz_class> phi_;                      // monic, length deg_+1
  std::vector<std::vector<mpq_class>> zeta_pow_;    // n_ entries
};

using CycloFieldPtr = std::shared_ptr<const CycloField>;

class Cyclo {
 public:
  Cyclo() = default;  // usable as zero in containers once assigned a field

  static Cyclo zero(CycloFieldPtr f);
  static Cyclo one(CycloFieldPtr f);
  static Cyclo integer(CycloFieldPtr f, const mpz_class& v);
  static Cyclo rational(CycloFieldPtr f, const mpq_class& v);
  static Cyclo root(CycloFieldPtr f, std::int64_t k);  // zeta^k
  // e^{2 pi i p/q}; q must divide the conductor
  static Cyclo from_angle(CycloFieldPtr f, const RationalAngle& a);

  bool is_zero() const;
  const CycloFieldPtr& field() const { return field_; }

  Cyclo operator+(const Cyclo& o) const;
  Cyclo operator-(const Cyclo& o) const;
  Cyclo operator*(const Cyclo& o) const;
  Cyclo operator-() const;
  Cyclo conj() const;      // zeta -> zeta^{n-1}
  Cyclo inverse() const;   // extended Euclid mod Phi_n
  bool operator==(const Cyclo& o) const;

  std::complex<double> to_complex() const;

 private:
  explicit Cyclo(CycloFieldPtr f) : field_(std::move(f)), c_(field_->degree()) {}
  CycloFieldPtr field_;
  std::vector<mpq_class> c_;
};

}  // namespace harper
