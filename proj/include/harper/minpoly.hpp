#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "harper/refine.hpp"

namespace harper {

// Primitive integer polynomial, coefficients lowest degree first.
struct PolynomialZ {
  std::vector<mpz_class> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  mpz_class height() const;
  void make_primitive();  // divide by content, leading coefficient > 0
  BigFloat evaluate(const BigFloat& x) const;
  std::string to_string() const;  // human-readable, highest degree first
  bool operator==(const PolynomialZ& o) const { return coeffs == o.coeffs; }
};

struct MinPolyResult {
  enum class Status { Found, NotFound };
  Status status = Status::NotFound;
  PolynomialZ poly;
  double p_of_x_log2 = 0.0;     // log2 |p(x)|
  bool irreducibility_verified = false;
};

// Integer-relation recovery of the lowest-degree integer polynomial
// annihilating x, via LLL on the lattice spanned by (e_i, round(2^P x^i)).
// Degrees are searched in ascending order, so the first hit has minimal
// degree within the height bound. NotFound signals insufficient
// precision/bounds, never transcendence.
MinPolyResult minimal_polynomial(const HighPrecValue& x, int max_degree, std::int64_t max_height);

// LLL with Lovasz constant 3/4 over exact rationals (small dimensions).
void lll_reduce(std::vector<std::vector<mpz_class>>& basis);

}  // namespace harper
