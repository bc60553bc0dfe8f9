#pragma once

#include "harper/bigfloat.hpp"
#include "harper/truncation.hpp"

namespace harper {

struct HighPrecValue {
  BigFloat value;
  double residual_log2 = 0.0;  // log2 of ||(T - lambda) v|| / ||v|| at convergence
  int precision_bits = 0;

  static HighPrecValue from_double(double x, int precision_bits) {
    return {BigFloat(x, precision_bits), -52.0, precision_bits};
  }
};

// Shifted inverse iteration in extended precision. The shift stays fixed at
// lambda0 until the iteration has clearly locked onto one eigenvalue; a
// shift equidistant from two nearby eigenvalues therefore stalls and is
// reported as a numeric error instead of silently picking a side.
HighPrecValue refine_eigenvalue(const Truncation& t, double lambda0, int precision_bits,
                                int max_iterations = 80);

}  // namespace harper
