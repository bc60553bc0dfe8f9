#include "harper/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace harper {

namespace {

void require_lattice(const GroupElement& g, int dim, const char* who) {
  if (g.family() != Family::Lattice || static_cast<int>(g.coords().size()) != dim)
    throw domain_error(std::string(who) + ": element/group mismatch");
}

std::complex<double> unit_phase(double radians) {
  return {std::cos(radians), std::sin(radians)};
}

}  // namespace

Multiplier Multiplier::trivial() {
  Multiplier m;
  m.kind_ = Kind::Trivial;
  m.order_ = 1;
  return m;
}

Multiplier Multiplier::magnetic_z2(double alpha1, double alpha2) {
  Multiplier m;
  m.kind_ = Kind::MagneticZ2;
  m.a1_ = alpha1;
  m.a2_ = alpha2;
  return m;
}

Multiplier Multiplier::magnetic_z2(RationalAngle alpha1, RationalAngle alpha2) {
  Multiplier m;
  m.kind_ = Kind::MagneticZ2;
  m.a1_ = alpha1.radians();
  m.a2_ = alpha2.radians();
  m.a1x_ = alpha1;
  m.a2x_ = alpha2;
  m.order_ = lcm64(alpha1.den(), alpha2.den());
  return m;
}

Multiplier Multiplier::symplectic(double theta, int genus) {
  if (genus < 1) throw domain_error("symplectic multiplier: genus must be >= 1");
  Multiplier m;
  m.kind_ = Kind::SymplecticLattice;
  m.theta_ = theta;
  m.genus_ = genus;
  return m;
}

Multiplier Multiplier::symplectic(std::int64_t num, std::int64_t den, int genus) {
  Multiplier m = symplectic(static_cast<double>(num) / static_cast<double>(den), genus);
  m.thetax_ = RationalAngle(num, den);
  m.theta_ = static_cast<double>(num) / static_cast<double>(den);
  m.order_ = m.thetax_->den();
  return m;
}

Multiplier Multiplier::pullback(GroupModel projection_model, Multiplier inner) {
  if (!projection_model.has_quotient())
    throw domain_error("pullback: model carries no quotient projection");
  Multiplier m;
  m.kind_ = Kind::Pullback;
  m.model_ = std::make_shared<const GroupModel>(std::move(projection_model));
  m.order_ = inner.order();
  m.inner_ = std::make_shared<const Multiplier>(std::move(inner));
  return m;
}

Multiplier Multiplier::coboundary(SMap s, Multiplier inner, GroupModel model) {
  Multiplier m;
  m.kind_ = Kind::Coboundary;
  if (inner.order() && s.order) m.order_ = lcm64(*inner.order(), *s.order);
  m.smap_ = std::move(s);
  m.inner_ = std::make_shared<const Multiplier>(std::move(inner));
  m.model_ = std::make_shared<const GroupModel>(std::move(model));
  return m;
}

Multiplier Multiplier::quotient_table(GroupModel finite_model, const Multiplier& source) {
  auto elements = enumerate_group(finite_model);
  const std::size_t n = elements.size();
  std::vector<std::vector<std::complex<double>>> table(n, std::vector<std::complex<double>>(n));
  std::vector<std::vector<std::optional<RationalAngle>>> exact(
      n, std::vector<std::optional<RationalAngle>>(n));
  bool all_exact = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      table[i][j] = source.evaluate(elements[i], elements[j]);
      exact[i][j] = source.evaluate_exact(elements[i], elements[j]);
      all_exact = all_exact && exact[i][j].has_value();
    }
  Multiplier m;
  m.kind_ = Kind::QuotientTable;
  m.model_ = std::make_shared<const GroupModel>(std::move(finite_model));
  m.table_ = std::make_shared<const std::vector<std::vector<std::complex<double>>>>(std::move(table));
  if (all_exact)
    m.table_exact_ =
        std::make_shared<const std::vector<std::vector<std::optional<RationalAngle>>>>(std::move(exact));
  m.table_index_ = std::make_shared<const std::vector<GroupElement>>(std::move(elements));
  m.order_ = source.order();
  return m;
}

Multiplier Multiplier::from_table(GroupModel finite_model,
                                  std::vector<std::vector<std::complex<double>>> table) {
  auto elements = enumerate_group(finite_model);
  if (table.size() != elements.size())
    throw domain_error("from_table: table size does not match group order");
  Multiplier m;
  m.kind_ = Kind::QuotientTable;
  m.model_ = std::make_shared<const GroupModel>(std::move(finite_model));
  m.table_ = std::make_shared<const std::vector<std::vector<std::complex<double>>>>(std::move(table));
  m.table_index_ = std::make_shared<const std::vector<GroupElement>>(std::move(elements));
  return m;
}

Multiplier Multiplier::conjugated() const {
  Multiplier m;
  m.kind_ = Kind::Conjugate;
  m.inner_ = std::make_shared<const Multiplier>(*this);
  m.order_ = order_;
  return m;
}

std::size_t Multiplier::table_pos(const GroupElement& g) const {
  const auto& idx = *table_index_;
  auto it = std::lower_bound(idx.begin(), idx.end(), g);
  if (it == idx.end() || !(*it == g)) throw domain_error("quotient table: unknown element");
  return static_cast<std::size_t>(it - idx.begin());
}

std::complex<double> Multiplier::evaluate(const GroupElement& a, const GroupElement& b) const {
  switch (kind_) {
    case Kind::Trivial:
      return {1.0, 0.0};
    case Kind::MagneticZ2: {
      require_lattice(a, 2, "MagneticZ2");
      require_lattice(b, 2, "MagneticZ2");
      if (a1x_ && a2x_) return evaluate_exact(a, b)->value();
      const double phase = a1_ * static_cast<double>(a.coords()[0]) * static_cast<double>(b.coords()[1]) +
                           a2_ * static_cast<double>(a.coords()[1]) * static_cast<double>(b.coords()[0]);
      return unit_phase(-phase);
    }
    case Kind::SymplecticLattice: {
      const int d = 2 * genus_;
      require_lattice(a, d, "symplectic");
      require_lattice(b, d, "symplectic");
      std::int64_t psi = 0;
      for (int j = 0; j < genus_; ++j)
        psi += a.coords()[j] * b.coords()[j + genus_] - a.coords()[j + genus_] * b.coords()[j];
      if (thetax_) return evaluate_exact(a, b)->value();
      return unit_phase(2.0 * M_PI * theta_ * static_cast<double>(psi));
    }
    case Kind::Pullback:
      return inner_->evaluate(quotient_project(*model_, a), quotient_project(*model_, b));
    case Kind::Coboundary: {
      const std::complex<double> sa = smap_.eval(a), sb = smap_.eval(b);
      if (std::abs(std::abs(sa) - 1.0) > 1e-9 || std::abs(std::abs(sb) - 1.0) > 1e-9)
        throw domain_error("coboundary twist: non-unimodular s");
      const GroupElement ab = multiply(*model_, a, b);
      return sa * sb * std::conj(smap_.eval(ab)) * inner_->evaluate(a, b);
    }
    case Kind::QuotientTable:
      return (*table_)[table_pos(a)][table_pos(b)];
    case Kind::Conjugate:
      return std::conj(inner_->evaluate(a, b));
  }
  throw domain_error("evaluate: bad multiplier kind");
}

std::optional<RationalAngle> Multiplier::evaluate_exact(const GroupElement& a,
                                                        const GroupElement& b) const {
  switch (kind_) {
    case Kind::Trivial:
      return RationalAngle(0, 1);
    case Kind::MagneticZ2: {
      if (!a1x_ || !a2x_) return std::nullopt;
      require_lattice(a, 2, "MagneticZ2");
      require_lattice(b, 2, "MagneticZ2");
      RationalAngle ang = a1x_->times(a.coords()[0] * b.coords()[1]) +
                          a2x_->times(a.coords()[1] * b.coords()[0]);
      return -ang;
    }
    case Kind::SymplecticLattice: {
      if (!thetax_) return std::nullopt;
      const int d = 2 * genus_;
      require_lattice(a, d, "symplectic");
      require_lattice(b, d, "symplectic");
      std::int64_t psi = 0;
      for (int j = 0; j < genus_; ++j)
        psi += a.coords()[j] * b.coords()[j + genus_] - a.coords()[j + genus_] * b.coords()[j];
      return thetax_->times(psi);
    }
    case Kind::Pullback:
      return inner_->evaluate_exact(quotient_project(*model_, a), quotient_project(*model_, b));
    case Kind::Coboundary: {
      if (!smap_.eval_exact) return std::nullopt;
      auto sa = smap_.eval_exact(a), sb = smap_.eval_exact(b);
      auto in = inner_->evaluate_exact(a, b);
      if (!sa || !sb || !in) return std::nullopt;
      auto sab = smap_.eval_exact(multiply(*model_, a, b));
      if (!sab) return std::nullopt;
      return *sa + *sb - *sab + *in;
    }
    case Kind::QuotientTable: {
      if (!table_exact_) return std::nullopt;
      return (*table_exact_)[table_pos(a)][table_pos(b)];
    }
    case Kind::Conjugate: {
      auto v = inner_->evaluate_exact(a, b);
      if (!v) return std::nullopt;
      return v->conj();
    }
  }
  return std::nullopt;
}

VerifyReport verify(const Multiplier& sigma, const GroupModel& model, std::uint64_t samples,
                    std::uint64_t seed) {
  if (samples < 1) throw domain_error("verify: samples must be >= 1");
  VerifyReport rep;
  auto check_triple = [&](const GroupElement& a, const GroupElement& b, const GroupElement& c) {
    const auto lhs = sigma.evaluate(b, c) * sigma.evaluate(a, multiply(model, b, c));
    const auto rhs = sigma.evaluate(multiply(model, a, b), c) * sigma.evaluate(a, b);
    rep.max_cocycle_residual = std::max(rep.max_cocycle_residual, std::abs(lhs - rhs));
  };
  auto check_norm = [&](const GroupElement& g) {
    const GroupElement e = model.identity();
    rep.max_normalization_residual =
        std::max({rep.max_normalization_residual, std::abs(sigma.evaluate(e, g) - 1.0),
                  std::abs(sigma.evaluate(g, e) - 1.0)});
  };

  if (model.finite() && model.group_order() <= 32) {
    const auto all = enumerate_group(model);
    for (const auto& a : all) {
      check_norm(a);
      for (const auto& b : all)
        for (const auto& c : all) {
          check_triple(a, b, c);
          ++rep.samples_used;
        }
    }
    rep.exhaustive = true;
    return rep;
  }

  const auto pool = ball(model, 4);
  Rng rng(seed);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const auto& a = pool[uniform_u64(rng, pool.size())];
    const auto& b = pool[uniform_u64(rng, pool.size())];
    const auto& c = pool[uniform_u64(rng, pool.size())];
    check_triple(a, b, c);
    check_norm(a);
    ++rep.samples_used;
  }
  return rep;
}

std::pair<Multiplier, SMap> inverse_normalize(const Multiplier& sigma, const GroupModel& model) {
  // s(g) = e^{i theta/2} with sigma(g,g^-1) = e^{i theta}, theta in [0, 2 pi).
  auto sigma_copy = std::make_shared<const Multiplier>(sigma);
  auto model_copy = std::make_shared<const GroupModel>(model);

  SMap s;
  s.eval = [sigma_copy, model_copy](const GroupElement& g) {
    const auto v = sigma_copy->evaluate(g, inverse(*model_copy, g));
    double theta = std::atan2(v.imag(), v.real());
    if (theta < 0) theta += 2.0 * M_PI;
    return unit_phase(theta / 2.0);
  };
  s.eval_exact = [sigma_copy, model_copy](const GroupElement& g) -> std::optional<RationalAngle> {
    const auto v = sigma_copy->evaluate_exact(g, inverse(*model_copy, g));
    if (!v) return std::nullopt;
    return RationalAngle(v->num(), 2 * v->den());  // halved principal angle
  };
  if (sigma.order()) s.order = 2 * *sigma.order();

  SMap s_conj;
  s_conj.eval = [s](const GroupElement& g) { return std::conj(s.eval(g)); };
  s_conj.eval_exact = [s](const GroupElement& g) -> std::optional<RationalAngle> {
    auto v = s.eval_exact(g);
    if (!v) return std::nullopt;
    return v->conj();
  };
  s_conj.order = s.order;

  return {coboundary_twist(sigma, s_conj, model), s};
}

Multiplier coboundary_twist(const Multiplier& sigma, const SMap& s, const GroupModel& model) {
  const std::complex<double> se = s.eval(model.identity());
  if (std::abs(se - std::complex<double>(1.0, 0.0)) > 1e-12)
    throw domain_error("coboundary twist: s(identity) != 1");
  return Multiplier::coboundary(s, sigma, model);
}

Multiplier symplectic_multiplier(double theta, int genus) { return Multiplier::symplectic(theta, genus); }

}  // namespace harper
