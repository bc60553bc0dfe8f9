#include <doctest.h>

#include "harper/algebra.hpp"
#include "harper/rng.hpp"
#include "harper/serialize.hpp"

using namespace harper;

namespace {

const GroupModel z2 = GroupModel::lattice(2);

GroupElement L(std::int64_t x, std::int64_t y) { return GroupElement::lattice({x, y}); }

BlockMatrix random_block(Rng& rng, int d) {
  BlockMatrix m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = Cplx(uniform_unit(rng) - 0.5, uniform_unit(rng) - 0.5);
  return m;
}

AlgebraElement random_element(const GroupModel& model, const Multiplier& sigma, int d, Rng& rng,
                              int radius = 2) {
  const auto pool = ball(model, radius);
  AlgebraElement a(model, sigma, d);
  const std::size_t n = 3 + uniform_u64(rng, 3);
  for (std::size_t i = 0; i < n; ++i)
    a.add(pool[uniform_u64(rng, pool.size())], random_block(rng, d));
  return a;
}

AlgebraElement random_self_adjoint(const GroupModel& model, const Multiplier& sigma, int d,
                                   Rng& rng) {
  const AlgebraElement a = random_element(model, sigma, d, rng);
  const AlgebraElement ad = adjoint(a);
  AlgebraElement out(model, sigma, d);
  for (const auto& [g, m] : a.support()) out.add(g, m);
  for (const auto& [g, m] : ad.support()) out.add(g, m);
  return out;
}

VectorFS random_vector(const GroupModel& model, int d, Rng& rng, int radius = 2) {
  const auto pool = ball(model, radius);
  VectorFS f(model, d);
  const std::size_t n = 2 + uniform_u64(rng, 4);
  for (std::size_t i = 0; i < n; ++i) {
    BlockVector v(d);
    for (int j = 0; j < d; ++j) v(j) = Cplx(uniform_unit(rng) - 0.5, uniform_unit(rng) - 0.5);
    f.add(pool[uniform_u64(rng, pool.size())], v);
  }
  return f;
}

double vec_distance(const VectorFS& a, const VectorFS& b) {
  double s = 0.0;
  for (const auto& [g, v] : a.support()) s += (v - b.at(g)).squaredNorm();
  for (const auto& [g, v] : b.support())
    if (!a.support().count(g)) s += v.squaredNorm();
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("apply: adjacency action of the Harper operator") {
  const AlgebraElement h = build_named_operator("harper", z2, Multiplier::trivial(), 1);
  const VectorFS img = apply(h, VectorFS::delta(z2, z2.identity(), 1));
  CHECK(img.support().size() == 4);
  for (const auto& g : z2.generators()) CHECK(std::abs(img.at(g)(0) - 1.0) == 0.0);
}

TEST_CASE("apply: (A delta_e)(x) = A(x)") {
  Rng rng(21);
  const Multiplier sigma = Multiplier::magnetic_z2(0.9, 0.4);
  const AlgebraElement a = random_element(z2, sigma, 2, rng);
  const VectorFS f = VectorFS::delta(z2, z2.identity(), 2, 1);
  const VectorFS img = apply(a, f);
  for (const auto& [g, m] : a.support())
    CHECK((img.at(g) - m.col(1)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("apply: single twisted translation acts as sigma(g,h) delta_gh") {
  const Multiplier sigma = Multiplier::magnetic_z2(1.234, -0.345);
  AlgebraElement lg(z2, sigma, 1);
  const GroupElement g = L(2, -1), h = L(1, 3);
  lg.add(g, BlockMatrix::Identity(1, 1));
  const VectorFS img = apply(lg, VectorFS::delta(z2, h, 1));
  CHECK(img.support().size() == 1);
  CHECK(std::abs(img.at(multiply(z2, g, h))(0) - sigma.evaluate(g, h)) == 0.0);
}

TEST_CASE("alg_multiply: delta products and group-ring reduction") {
  const Multiplier sigma = Multiplier::magnetic_z2(0.31, 0.77);
  const GroupElement g = L(1, 2), h = L(-2, 1);
  AlgebraElement dg(z2, sigma, 1), dh(z2, sigma, 1);
  dg.add(g, BlockMatrix::Identity(1, 1));
  dh.add(h, BlockMatrix::Identity(1, 1));
  const AlgebraElement prod = alg_multiply(dg, dh);
  CHECK(prod.support().size() == 1);
  CHECK(std::abs(prod.coefficient(multiply(z2, g, h))(0, 0) - sigma.evaluate(g, h)) == 0.0);

  // trivial multiplier: L_g L_{g^-1} is the identity element
  AlgebraElement tg(z2, Multiplier::trivial(), 1), tgi(z2, Multiplier::trivial(), 1);
  tg.add(g, BlockMatrix::Identity(1, 1));
  tgi.add(inverse(z2, g), BlockMatrix::Identity(1, 1));
  const AlgebraElement unit = alg_multiply(tg, tgi);
  CHECK(unit.support().size() == 1);
  CHECK(unit.coefficient(z2.identity())(0, 0) == Cplx(1.0, 0.0));
}

TEST_CASE("alg_multiply: harper squared has identity coefficient 4I") {
  const AlgebraElement h = build_named_operator("harper", z2, Multiplier::trivial(), 1);
  const AlgebraElement h2 = alg_multiply(h, h);
  CHECK(h2.coefficient(z2.identity())(0, 0) == Cplx(4.0, 0.0));
}

TEST_CASE("apply/alg_multiply consistency") {
  Rng rng(5);
  const Multiplier sigma = Multiplier::magnetic_z2(0.8, -1.1);
  for (int i = 0; i < 50; ++i) {
    const AlgebraElement a = random_element(z2, sigma, 2, rng);
    const AlgebraElement b = random_element(z2, sigma, 2, rng);
    const VectorFS f = random_vector(z2, 2, rng);
    CHECK(vec_distance(apply(alg_multiply(a, b), f), apply(a, apply(b, f))) < 1e-12);
  }
}

TEST_CASE("adjoint") {
  SUBCASE("trivial multiplier moves the block to the inverse") {
    Rng rng(31);
    const BlockMatrix m = random_block(rng, 3);
    AlgebraElement a(z2, Multiplier::trivial(), 3);
    a.add(L(2, 1), m);
    const AlgebraElement ad = adjoint(a);
    CHECK((ad.coefficient(L(-2, -1)) - BlockMatrix(m.adjoint())).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("harper is self-adjoint") {
    const AlgebraElement h = build_named_operator("harper", z2, Multiplier::trivial(), 1);
    const AlgebraElement had = adjoint(h);
    for (const auto& [g, m] : h.support())
      CHECK((had.coefficient(g) - m).cwiseAbs().maxCoeff() == 0.0);
    CHECK(h.certify_self_adjoint());
  }
  SUBCASE("pairing identity <Af,u> = <f,A*u>") {
    Rng rng(77);
    const Multiplier sigma = Multiplier::magnetic_z2(0.5, 1.9);
    for (int i = 0; i < 50; ++i) {
      const AlgebraElement a = random_element(z2, sigma, 2, rng);
      const VectorFS f = random_vector(z2, 2, rng);
      const VectorFS u = random_vector(z2, 2, rng);
      CHECK(std::abs(inner(apply(a, f), u) - inner(f, apply(adjoint(a), u))) < 1e-12);
    }
  }
}

TEST_CASE("trace") {
  const AlgebraElement h = build_named_operator("harper", z2, Multiplier::trivial(), 1);
  CHECK(trace(h) == Cplx(0.0, 0.0));

  AlgebraElement id3(z2, Multiplier::trivial(), 3);
  id3.add(z2.identity(), BlockMatrix::Identity(3, 3));
  CHECK(trace(id3) == Cplx(3.0, 0.0));

  // cyclicity on random twisted pairs
  Rng rng(13);
  const Multiplier sigma = Multiplier::magnetic_z2(1.3, 0.2);
  for (int i = 0; i < 100; ++i) {
    const AlgebraElement a = random_element(z2, sigma, 2, rng);
    const AlgebraElement b = random_element(z2, sigma, 2, rng);
    CHECK(std::abs(trace(alg_multiply(a, b)) - trace(alg_multiply(b, a))) < 1e-10);
  }
}

TEST_CASE("named operators") {
  const Multiplier sigma = Multiplier::magnetic_z2(RationalAngle(0, 1), RationalAngle(1, 3));
  const AlgebraElement h = build_named_operator("harper", z2, sigma, 1);
  CHECK(h.support().size() == 4);
  CHECK(h.certify_self_adjoint());

  const AlgebraElement dml = build_named_operator("dml", z2, sigma, 2);
  CHECK((dml.coefficient(z2.identity()) - 4.0 * BlockMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(trace(dml) == Cplx(8.0, 0.0));
  CHECK(dml.certify_self_adjoint());

  const GroupModel lamp = GroupModel::lamplighter();
  const AlgebraElement rw = build_named_operator("lamplighter_rw", lamp, Multiplier::trivial(), 1);
  REQUIRE(rw.support().size() == 4);
  CHECK(rw.support().count(GroupElement::lamplighter({}, 1)) == 1);
  CHECK(rw.support().count(GroupElement::lamplighter({0}, 1)) == 1);
  CHECK(rw.support().count(GroupElement::lamplighter({}, -1)) == 1);
  CHECK(rw.support().count(GroupElement::lamplighter({-1}, -1)) == 1);
  CHECK(rw.certify_self_adjoint());

  CHECK_THROWS_AS(build_named_operator("nonsense", z2, sigma, 1), domain_error);

  GroupModel asym = GroupModel::lattice(2);
  asym.set_generators({L(1, 0), L(0, 1)});
  CHECK_THROWS_AS(build_named_operator("harper", asym, sigma, 1), domain_error);
}

TEST_CASE("translation identities") {
  Rng rng(8);
  const Multiplier sigma = Multiplier::magnetic_z2(0.37, 1.21);
  const Multiplier sigma_conj = sigma.conjugated();
  const auto pool = ball(z2, 3);
  for (int i = 0; i < 60; ++i) {
    const GroupElement g = pool[uniform_u64(rng, pool.size())];
    const GroupElement h = pool[uniform_u64(rng, pool.size())];
    const VectorFS f = random_vector(z2, 1, rng);

    // right sigma-translations commute with left conj(sigma)-translations
    const VectorFS lhs = right_translate(z2, sigma, g, left_translate(z2, sigma_conj, h, f));
    const VectorFS rhs = left_translate(z2, sigma_conj, h, right_translate(z2, sigma, g, f));
    CHECK(vec_distance(lhs, rhs) < 1e-13);

    // U-conjugation: U L_g = R_g U
    const VectorFS ul = u_conjugate(z2, sigma, left_translate(z2, sigma, g, f));
    const VectorFS ru = right_translate(z2, sigma, g, u_conjugate(z2, sigma, f));
    CHECK(vec_distance(ul, ru) < 1e-13);

    // adjoint of the right conj(sigma)-translation is sigma(g,g^-1) R_{g^-1}
    const VectorFS u = random_vector(z2, 1, rng);
    const Cplx lhs_ip = inner(right_translate(z2, sigma_conj, g, f), u);
    const VectorFS rg = right_translate(z2, sigma_conj, inverse(z2, g), u);
    Cplx rhs_ip = 0.0;
    for (const auto& [x, v] : f.support())
      rhs_ip += (rg.at(x) * sigma.evaluate(g, inverse(z2, g))).dot(v);
    CHECK(std::abs(lhs_ip - rhs_ip) < 1e-13);
  }
}

TEST_CASE("coboundary conjugation S A = A' S") {
  Rng rng(88);
  const Multiplier sigma = Multiplier::magnetic_z2(0.9, -0.4);
  // genuinely nonlinear phase so the coboundary is nontrivial
  SMap s;
  s.eval = [](const GroupElement& g) {
    if (g.coords()[0] == 0 && g.coords()[1] == 0) return Cplx(1.0, 0.0);
    return std::exp(Cplx(0, 0.83 * static_cast<double>(g.coords()[0]) +
                               1.77 * static_cast<double>(g.coords()[1]) +
                               0.41 * static_cast<double>(g.coords()[0] * g.coords()[0]) -
                               0.27 * static_cast<double>(g.coords()[0] * g.coords()[1])));
  };
  SMap sc;
  sc.eval = [s](const GroupElement& g) { return std::conj(s.eval(g)); };
  // A over sigma corresponds to A'(g) = s(g) A(g) over sigma' with
  // sigma = s(g)s(h)conj(s(gh)) sigma'(g,h), i.e. sigma' = twist(sigma, conj s)
  const Multiplier sigma_p = coboundary_twist(sigma, sc, z2);
  for (int i = 0; i < 40; ++i) {
    const AlgebraElement a = random_element(z2, sigma, 1, rng);
    AlgebraElement ap(z2, sigma_p, 1);
    for (const auto& [g, m] : a.support()) ap.add(g, BlockMatrix(m * s.eval(g)));
    const VectorFS f = random_vector(z2, 1, rng);
    CHECK(vec_distance(pointwise_multiply(s, apply(a, f)), apply(ap, pointwise_multiply(s, f))) <
          1e-12);
  }
}

TEST_CASE("extension lift") {
  SUBCASE("order 1 is the group itself") {
    const AlgebraElement h = build_named_operator("harper", z2, Multiplier::trivial(), 1);
    const ExtensionLift lift = lift_to_extension(h);
    CHECK(lift.extension_model.ext_order() == 1);
    CHECK(lift.lifted.support().size() == 4);
  }
  SUBCASE("flux 1/2 harper lifts to the Z_2 extension") {
    const Multiplier sigma = Multiplier::magnetic_z2(RationalAngle(0, 1), RationalAngle(1, 2));
    const AlgebraElement h = build_named_operator("harper", z2, sigma, 1);
    const ExtensionLift lift = lift_to_extension(h);
    CHECK(lift.extension_model.ext_order() == 2);
    CHECK(lift.lifted.support().size() == 4);
    for (const auto& [g, m] : lift.lifted.support()) CHECK(g.ext_k() == 0);

    // Psi(A) xi = xi A on random finitely supported f
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
      const VectorFS f = random_vector(z2, 1, rng);
      const VectorFS lhs = apply(lift.lifted, xi_lift(lift.extension_model, f));
      const VectorFS rhs = xi_lift(lift.extension_model, apply(h, f));
      CHECK(vec_distance(lhs, rhs) < 1e-13);
    }
  }
  SUBCASE("non-rational multiplier refuses") {
    const AlgebraElement h = build_named_operator("harper", z2, Multiplier::magnetic_z2(0.3, 0.4), 1);
    CHECK_THROWS_AS(lift_to_extension(h), domain_error);
  }
}

TEST_CASE("operator JSON round-trip is exact for rational phases") {
  Rng rng(10);
  const Multiplier sigma = Multiplier::magnetic_z2(RationalAngle(1, 4), RationalAngle(1, 3));
  const AlgebraElement a = random_self_adjoint(z2, sigma, 2, rng);
  const Json j = to_json(a);
  const AlgebraElement b = operator_from_json(j);
  CHECK(b.block_size() == a.block_size());
  REQUIRE(b.support().size() == a.support().size());
  for (const auto& [g, m] : a.support()) {
    const BlockMatrix mb = b.coefficient(g);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) CHECK(m(r, c) == mb(r, c));  // bitwise
  }
  CHECK(*b.sigma().order() == *a.sigma().order());
  CHECK(to_json(b).dump() == j.dump());
}
