#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "harper/algebra.hpp"

namespace harper {

// Finite Folner compression A^(X) = P_X A |_{H_X}. Basis order is
// (element, block component): index = elem * d + a. For extension models the
// scheme's set is the full fibre p^-1(X) over a base Folner set X, the kernel
// order r divides out of the trace normalization, and the identity-coset
// section {(z=1, x)} is recorded for the literal tau_X formula.
struct Truncation {
  Eigen::MatrixXcd matrix;  // Hermitian, dimension d * r * #X
  std::vector<GroupElement> basis_elements;
  int d = 1;
  std::int64_t kernel_order = 1;   // r (1 unless extension)
  std::int64_t base_count = 0;     // #X
  double norm1_bound = 0.0;        // sum_g ||A(g)||_op
  bool real_valued = false;        // exactly zero imaginary part
  std::vector<std::int64_t> section;  // basis positions of the identity coset
};

Truncation truncate(const AlgebraElement& a, const FolnerScheme& scheme,
                    std::int64_t cap_dim = 6000);

// tau_X(A^(X)^k) computed by exact finite application with projection to X
// after every step (no eigensolve).
Cplx truncated_moment(const AlgebraElement& a, const FolnerScheme& scheme, int k);

}  // namespace harper
