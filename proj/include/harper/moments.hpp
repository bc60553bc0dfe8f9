#pragma once

#include "harper/algebra.hpp"

namespace harper {

// tau(A^k) by repeated exact twisted convolution. The support of A^k is
// capped to guard against blowup on thick supports.
Cplx exact_moment(const AlgebraElement& a, int k, int k_cap = 12,
                  std::size_t support_cap = 2000000);

}  // namespace harper
