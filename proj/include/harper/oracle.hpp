#pragma once

#include <gmpxx.h>

#include <map>
#include <vector>

#include "harper/algebra.hpp"
#include "harper/cyclotomic.hpp"

namespace harper::oracle {

// Independent reference computations. Deliberately naive and kept apart from
// the production paths they validate.

// Accumulated walk-phase sum: closed_walks counts the closed length-k
// support sequences (equals the trivial-multiplier moment of the
// all-weights-1 operator on the same support).
struct WalkPhaseSum {
  Cplx sum{0.0, 0.0};
  std::uint64_t closed_walks = 0;
  int k = 0;
};

// tau(A^k) by enumerating all length-k support sequences with product the
// identity, accumulating matrix products and iterated cocycle phases
//   L_{g1} ... L_{gk} = prod_i sigma(g1...g_{i-1}, g_i) L_{g1...gk}.
// Independent of alg_multiply.
WalkPhaseSum walk_phase_sum(const AlgebraElement& a, int k, std::uint64_t walk_cap = 20000000);
Cplx walk_moment(const AlgebraElement& a, int k, std::uint64_t walk_cap = 20000000);

// fraction-free integer elimination
std::pair<std::int64_t, std::int64_t> kernel_rank_exact(std::vector<std::vector<mpz_class>> m);
// Gaussian elimination over a cyclotomic field
std::pair<std::int64_t, std::int64_t> kernel_rank_exact(std::vector<std::vector<Cyclo>> m);

// Exact mirror of the twisted algebra over Q(zeta): support maps with
// cyclotomic matrix coefficients. Used to state "exactly zero" identities
// (intertwining, coboundary conjugation, root-of-unity traces).
struct ExactOperator {
  GroupModel model;
  Multiplier sigma;
  CycloFieldPtr field;
  int d = 1;
  std::map<GroupElement, std::vector<Cyclo>> support;  // row-major d*d blocks
};

struct ExactVector {
  GroupModel model;
  CycloFieldPtr field;
  int d = 1;
  std::map<GroupElement, std::vector<Cyclo>> support;  // d-component values
};

// Converts an integer-coefficient operator; the field conductor must be a
// multiple of the multiplier order.
ExactOperator to_exact(const AlgebraElement& a, const CycloFieldPtr& field);

ExactVector exact_apply(const ExactOperator& a, const ExactVector& f);
Cyclo exact_trace(const ExactOperator& a);
ExactOperator exact_multiply(const ExactOperator& a, const ExactOperator& b);
bool exact_equal(const ExactVector& f, const ExactVector& g);

}  // namespace harper::oracle
