#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "harper/group.hpp"
#include "harper/rational_angle.hpp"
#include "harper/rng.hpp"

namespace harper {

// Unimodular function s : G -> U(1) with s(1) = 1, used for coboundary
// twists. `eval_exact` and `order` are set when the values are roots of
// unity of known order.
struct SMap {
  std::function<std::complex<double>(const GroupElement&)> eval;
  std::function<std::optional<RationalAngle>(const GroupElement&)> eval_exact;
  std::optional<std::int64_t> order;
};

// A normalized U(1)-valued 2-cocycle: sigma(b,c) sigma(a,bc) = sigma(ab,c)
// sigma(a,b) and sigma(1,g) = sigma(g,1) = 1. Rational multipliers
// (sigma^r = 1) evaluate exactly as root-of-unity angles.
class Multiplier {
 public:
  enum class Kind { Trivial, MagneticZ2, SymplecticLattice, Pullback, Coboundary, QuotientTable, Conjugate };

  Multiplier() : kind_(Kind::Trivial) {}

  static Multiplier trivial();
  // sigma((m',n'),(m,n)) = exp(-i (a1 m' n + a2 n' m)), angles in radians.
  static Multiplier magnetic_z2(double alpha1, double alpha2);
  // exact variant: alpha_i = 2 pi * (p_i / q_i)
  static Multiplier magnetic_z2(RationalAngle alpha1, RationalAngle alpha2);
  // sigma = exp(2 pi i theta Psi') with Psi'(u,v) = sum_j (u_j v_{j+g} - u_{j+g} v_j)
  static Multiplier symplectic(double theta, int genus);
  static Multiplier symplectic(std::int64_t theta_num, std::int64_t theta_den, int genus);
  static Multiplier pullback(GroupModel projection_model, Multiplier inner);
  static Multiplier coboundary(SMap s, Multiplier inner, GroupModel model);
  // dense table over a finite group, tabulated from `source`
  static Multiplier quotient_table(GroupModel finite_model, const Multiplier& source);
  static Multiplier from_table(GroupModel finite_model,
                               std::vector<std::vector<std::complex<double>>> table);

  Kind kind() const { return kind_; }
  Multiplier conjugated() const;

  std::complex<double> evaluate(const GroupElement& a, const GroupElement& b) const;
  // exact root-of-unity evaluation; nullopt when this multiplier is not rational
  std::optional<RationalAngle> evaluate_exact(const GroupElement& a, const GroupElement& b) const;

  // rationality metadata: r with sigma^r = 1 (not necessarily minimal)
  std::optional<std::int64_t> order() const { return order_; }
  bool is_rational() const { return order_.has_value(); }

  double alpha1() const { return a1_; }
  double alpha2() const { return a2_; }
  std::optional<RationalAngle> alpha1_exact() const { return a1x_; }
  std::optional<RationalAngle> alpha2_exact() const { return a2x_; }
  double theta() const { return theta_; }
  int genus() const { return genus_; }
  const Multiplier& inner() const { return *inner_; }
  const GroupModel& twist_model() const { return *model_; }
  const SMap& smap() const { return smap_; }

 private:
  Kind kind_;
  double a1_ = 0.0, a2_ = 0.0;
  std::optional<RationalAngle> a1x_, a2x_;
  double theta_ = 0.0;
  std::optional<RationalAngle> thetax_;
  int genus_ = 0;
  std::shared_ptr<const Multiplier> inner_;
  std::shared_ptr<const GroupModel> model_;  // pullback projection / twist group / table group
  SMap smap_;
  std::shared_ptr<const std::vector<std::vector<std::complex<double>>>> table_;
  std::shared_ptr<const std::vector<std::vector<std::optional<RationalAngle>>>> table_exact_;
  std::shared_ptr<const std::vector<GroupElement>> table_index_;
  std::optional<std::int64_t> order_;

  std::size_t table_pos(const GroupElement& g) const;
};

struct VerifyReport {
  double max_cocycle_residual = 0.0;
  double max_normalization_residual = 0.0;
  std::uint64_t samples_used = 0;
  bool exhaustive = false;
};

// Randomized (exhaustive on small finite quotients) check of the cocycle
// identity and normalization. Deterministic for a fixed seed.
VerifyReport verify(const Multiplier& sigma, const GroupModel& model, std::uint64_t samples,
                    std::uint64_t seed);

// Cohomologous multiplier sigma' with sigma'(g, g^-1) = 1 for all g, obtained
// from s(g) = e^{i theta/2} where sigma(g,g^-1) = e^{i theta}, theta in [0,2pi).
// Returns (sigma', s); s satisfies s(g) = s(g^-1) and s(g)^2 = sigma(g,g^-1).
std::pair<Multiplier, SMap> inverse_normalize(const Multiplier& sigma, const GroupModel& model);

// sigma'(g,h) = s(g) s(h) conj(s(gh)) sigma(g,h)
Multiplier coboundary_twist(const Multiplier& sigma, const SMap& s, const GroupModel& model);

Multiplier symplectic_multiplier(double theta, int genus);

}  // namespace harper
