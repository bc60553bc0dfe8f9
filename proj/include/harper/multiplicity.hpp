#pragma once

#include <cstdint>

#include "harper/algebra.hpp"

namespace harper {

enum class MultiplicityMode { Exact, Numeric };

struct MultiplicityResult {
  std::int64_t multiplicity = 0;
  std::int64_t total_dim = 0;
  double normalized = 0.0;
};

// dim ker(A - lambda) on a finite quotient, lambda = num/den exact. Exact
// mode runs fraction-free integer elimination (cyclotomic Gaussian
// elimination when the multiplier is a nontrivial root of unity); the
// lamplighter family is decomposed into lamp-character blocks first, which
// keeps the elimination exact and small. Numeric mode clusters eigenvalues.
MultiplicityResult quotient_multiplicity(const AlgebraElement& a, std::int64_t lambda_num,
                                         std::int64_t lambda_den, MultiplicityMode mode,
                                         double cluster_tol = 1e-8,
                                         std::int64_t exact_dense_cap = 4096);

// The invariant blocks of an integer-coefficient operator over Z2 wr Z_n in
// the lamp-character basis (entries are small integers). Eigenvalues of the
// blocks are exactly the quotient eigenvalues.
std::vector<Eigen::MatrixXd> lamplighter_character_blocks(const AlgebraElement& a);

}  // namespace harper
