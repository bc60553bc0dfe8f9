#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <string>

#include "harper/cocycle.hpp"
#include "harper/group.hpp"

namespace harper {

using Cplx = std::complex<double>;
using BlockMatrix = Eigen::MatrixXcd;
using BlockVector = Eigen::VectorXcd;

// Finitely supported C^d-valued function on the group (an element of
// l^2(G)^d with finite support). Canonical: no exactly-zero entries.
class VectorFS {
 public:
  VectorFS(GroupModel model, int d) : model_(std::move(model)), d_(d) {}

  const GroupModel& model() const { return model_; }
  int block_size() const { return d_; }
  const std::map<GroupElement, BlockVector>& support() const { return sup_; }

  void add(const GroupElement& g, const BlockVector& v);
  BlockVector at(const GroupElement& g) const;  // zero when absent
  double norm() const;

  static VectorFS delta(const GroupModel& model, const GroupElement& g, int d, int component = 0);

 private:
  GroupModel model_;
  int d_;
  std::map<GroupElement, BlockVector> sup_;
};

// Element of M_d(K(G,sigma)): finitely supported map g -> d x d complex
// block, acting on l^2(G)^d by twisted left multiplication
//   (A f)(x) = sum_h A(x h^-1) sigma(x h^-1, h) f(h).
class AlgebraElement {
 public:
  AlgebraElement(GroupModel model, Multiplier sigma, int d)
      : model_(std::move(model)), sigma_(std::move(sigma)), d_(d) {}

  const GroupModel& model() const { return model_; }
  const Multiplier& sigma() const { return sigma_; }
  int block_size() const { return d_; }
  const std::map<GroupElement, BlockMatrix>& support() const { return sup_; }

  void add(const GroupElement& g, const BlockMatrix& m);
  BlockMatrix coefficient(const GroupElement& g) const;  // zero block when absent

  // sum over the support of block operator norms; every spectral value of
  // any truncation lies in [-norm1, norm1]
  double norm1() const;
  // word-metric propagation radius of the support
  int propagation() const;

  // A(g)^* == A(g^-1) sigma(g, g^-1) on every support element
  bool certify_self_adjoint(double tol = 1e-12) const;

 private:
  GroupModel model_;
  Multiplier sigma_;
  int d_;
  std::map<GroupElement, BlockMatrix> sup_;
};

VectorFS apply(const AlgebraElement& a, const VectorFS& f);
AlgebraElement alg_multiply(const AlgebraElement& a, const AlgebraElement& b);
// coefficient formula A+(g) = conj(sigma(g,g^-1)) A(g^-1)^*
AlgebraElement adjoint(const AlgebraElement& a);
// tr(A) = sum_j A(e)_{jj}, the von Neumann trace of M_d(K(G,sigma))
Cplx trace(const AlgebraElement& a);

Cplx inner(const VectorFS& f, const VectorFS& g);  // <f,g>, antilinear in g

// Twisted translations and the standard unitaries between them.
VectorFS left_translate(const GroupModel& model, const Multiplier& sigma, const GroupElement& g,
                        const VectorFS& f);  // (L^s_g f)(x) = s(g, g^-1 x) f(g^-1 x)
VectorFS right_translate(const GroupModel& model, const Multiplier& sigma, const GroupElement& g,
                         const VectorFS& f);  // (R^s_g f)(x) = f(xg) s(x, g)
VectorFS u_conjugate(const GroupModel& model, const Multiplier& sigma,
                     const VectorFS& f);  // (U^s f)(x) = s(x, x^-1) f(x^-1)
VectorFS pointwise_multiply(const SMap& s, const VectorFS& f);

// named operators: "harper" (sum of twisted translations over the symmetric
// generating set), "dml" (#S * I - harper), "lamplighter_rw"
// (t + at + t^-1 + (at)^-1)
AlgebraElement build_named_operator(const std::string& name, const GroupModel& model,
                                    const Multiplier& sigma, int d);

// Z_r-extension lift: A over (G, sigma) with sigma^r = 1 becomes A~ over
// G^sigma with trivial multiplier, A~(z,g) = A(g) if z = 1 else 0.
struct ExtensionLift {
  GroupModel extension_model;
  AlgebraElement lifted;
};
ExtensionLift lift_to_extension(const AlgebraElement& a);

// (xi f)(z,g) = conj(z) f(g); intertwines A~ with A: Psi(A) xi = xi A
VectorFS xi_lift(const GroupModel& extension_model, const VectorFS& f);

}  // namespace harper
