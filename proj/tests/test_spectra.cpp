#include <doctest.h>

#include "harper/butterfly.hpp"
#include "harper/density.hpp"
#include "harper/moments.hpp"
#include "harper/multiplicity.hpp"
#include "harper/oracle.hpp"
#include "harper/rng.hpp"

using namespace harper;

namespace {

const GroupModel z2 = GroupModel::lattice(2);

AlgebraElement harper_flux(std::int64_t p, std::int64_t q) {
  return build_named_operator("harper", z2,
                              Multiplier::magnetic_z2(RationalAngle(0, 1), RationalAngle(p, q)), 1);
}

std::vector<double> grid_on(double lo, double hi, int pts) {
  std::vector<double> g(static_cast<std::size_t>(pts));
  for (int i = 0; i < pts; ++i)
    g[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (pts - 1);
  return g;
}

std::vector<std::pair<double, double>> flag_cells(const std::vector<GapInterval>& v) {
  std::vector<std::pair<double, double>> out;
  for (const auto& g : v) out.emplace_back(g.lambda1, g.lambda2);
  return out;
}

}  // namespace

TEST_CASE("truncate: dimensions and exact Hermiticity") {
  const AlgebraElement h = build_named_operator("harper", z2, Multiplier::trivial(), 1);
  const FolnerScheme s2 = folner_set(z2, 2, 1);
  const Truncation t = truncate(h, s2);
  CHECK(t.matrix.rows() == 25);
  CHECK((t.matrix - t.matrix.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(t.real_valued);

  // extension kernel doubles the dimension
  const AlgebraElement h2 = harper_flux(1, 2);
  const ExtensionLift lift = lift_to_extension(h2);
  const Truncation te = truncate(lift.lifted, folner_set(lift.extension_model, 2, 1));
  CHECK(te.matrix.rows() == 50);
  CHECK(te.kernel_order == 2);
  CHECK((te.matrix - te.matrix.adjoint()).cwiseAbs().maxCoeff() == 0.0);

  // twisted truncation with an irrational flux is genuinely complex
  const AlgebraElement hi = build_named_operator("harper", z2, Multiplier::magnetic_z2(0.0, 0.7), 1);
  const Truncation ti = truncate(hi, s2);
  CHECK(!ti.real_valued);
  CHECK((ti.matrix - ti.matrix.adjoint()).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(truncate(h, folner_set(z2, 40, 1)), resource_error);
}

TEST_CASE("truncation eigenvalues lie in [-norm1, norm1]") {
  for (auto [p, q] : std::vector<std::pair<std::int64_t, std::int64_t>>{{0, 1}, {1, 2}, {1, 3}}) {
    const AlgebraElement h = harper_flux(p, q);
    const SpectralDensity sd = spectral_density(truncate(h, folner_set(z2, 4, 1)));
    CHECK(sd.eigenvalues().front() >= -h.norm1() - 1e-12);
    CHECK(sd.eigenvalues().back() <= h.norm1() + 1e-12);
  }
}

TEST_CASE("spectral density counting") {
  const SpectralDensity sd({0.0, 1.0, 1.0, 2.0}, 4, 1, 1e-9);
  CHECK(sd.F(1.0) == doctest::Approx(0.75));
  CHECK(sd.D(1.0) == doctest::Approx(0.5));
  CHECK(sd.F(-0.5) == 0.0);
  CHECK(sd.F(2.0) == 1.0);
  CHECK(sd.F(5.0) == 1.0);
  CHECK(sd.total_mass() == doctest::Approx(1.0));
}

TEST_CASE("second moment of the box density approaches tau(A^2) = 4") {
  const AlgebraElement h = build_named_operator("harper", z2, Multiplier::trivial(), 1);
  const int m = 10;
  const SpectralDensity sd = spectral_density(truncate(h, folner_set(z2, m, 1)));
  double second = 0.0;
  for (double e : sd.eigenvalues()) second += e * e;
  second /= static_cast<double>((2 * m + 1) * (2 * m + 1));
  const double ratio = folner_set(z2, m, 1).ratio();
  CHECK(std::abs(second - 4.0) <= 4.0 * ratio);
}

TEST_CASE("exact moments") {
  const AlgebraElement h = build_named_operator("harper", z2, Multiplier::trivial(), 1);
  CHECK(exact_moment(h, 1) == Cplx(0.0, 0.0));
  CHECK(exact_moment(h, 2) == Cplx(4.0, 0.0));
  CHECK(exact_moment(h, 4) == Cplx(36.0, 0.0));

  const double theta = 1.0;
  const AlgebraElement ht = build_named_operator("harper", z2, Multiplier::magnetic_z2(0.0, theta), 1);
  CHECK(std::abs(exact_moment(ht, 4) - Cplx(28.0 + 8.0 * std::cos(theta), 0.0)) < 1e-12);
  CHECK(std::abs(exact_moment(ht, 4) - oracle::walk_moment(ht, 4)) < 1e-12);

  CHECK_THROWS_AS(exact_moment(h, 13), resource_error);
}

TEST_CASE("truncated moments approach exact moments within the boundary bound") {
  // moment matching with the kappa = k * propagation boundary:
  //   |tau_m(A^(m)^k) - tau(A^k)| <= norm1^k * (#bd X_m / #X_m)
  const AlgebraElement h = build_named_operator("harper", z2, Multiplier::trivial(), 1);
  for (int k : {2, 4, 6}) {
    const Cplx exact = exact_moment(h, k);
    double prev_err = 1e18;
    for (int m : {4, 8, 16}) {
      const FolnerScheme scheme = folner_set(z2, m, k * h.propagation());
      const double err = std::abs(truncated_moment(h, scheme, k) - exact);
      CHECK(err <= std::pow(h.norm1(), k) * scheme.ratio() + 1e-12);
      CHECK(err < prev_err);
      prev_err = err;
    }
  }

  // lamplighter scheme: errors decrease for k <= 6; the kappa-boundary bound
  // is asserted at the levels where the 2k-neighbourhood is cheap to build
  const GroupModel lamp = GroupModel::lamplighter();
  const AlgebraElement rw = build_named_operator("lamplighter_rw", lamp, Multiplier::trivial(), 1);
  const int prop = rw.propagation();
  CHECK(prop == 2);  // the (at)^{+-1} hops have word length 2
  for (int k : {2, 4, 6}) {
    const Cplx exact = exact_moment(rw, k);
    double prev_err = 1e18;
    for (int m : {1, 2, 3}) {
      const double err =
          std::abs(truncated_moment(rw, folner_set(lamp, m, 0), k) - exact);
      CHECK(err < prev_err);
      prev_err = err;
    }
  }
  for (int k : {2, 4}) {
    const Cplx exact = exact_moment(rw, k);
    for (int m : {1, 2}) {
      const FolnerScheme scheme = folner_set(lamp, m, k * prop);
      const double err = std::abs(truncated_moment(rw, scheme, k) - exact);
      CHECK(err <= std::pow(rw.norm1(), k) * scheme.ratio() + 1e-12);
    }
  }
}

TEST_CASE("detect_gaps") {
  const AlgebraElement h = build_named_operator("harper", z2, Multiplier::trivial(), 1);
  std::vector<SpectralDensity> densities;
  for (int m : {5, 10}) densities.push_back(spectral_density(truncate(h, folner_set(z2, m, 1))));

  SUBCASE("fewer than two levels refuses") {
    CHECK_THROWS_AS(detect_gaps({densities[0]}, grid_on(-5, 5, 11), 1e-3), domain_error);
  }
  SUBCASE("beyond the norm bound is flagged, the bulk is not") {
    const std::vector<double> grid = {-1.0, 1.0, h.norm1() + 0.5, h.norm1() + 1.0};
    const auto flags = detect_gaps(densities, grid, 1e-3);
    REQUIRE(flags.size() == 1);
    CHECK(flags[0].lambda1 == doctest::Approx(h.norm1() + 0.5));
    for (const auto& g : flags) CHECK(!(g.lambda1 == -1.0 && g.lambda2 == 1.0));
  }
  SUBCASE("(-1,1) carries bulk mass at every level") {
    for (const auto& d : densities) CHECK(d.F(1.0) - d.F(-1.0) > 0.2);
  }
}

TEST_CASE("weak spectral approximation: converged grid points are trend-consistent") {
  // where the top two levels agree to 1e-3, the middle level lies between
  // the earliest and the latest value at the same resolution
  for (auto [p, q] : std::vector<std::pair<std::int64_t, std::int64_t>>{{0, 1}, {1, 2}}) {
    const AlgebraElement h = harper_flux(p, q);
    std::vector<SpectralDensity> F;
    for (int m : {5, 10, 20}) F.push_back(spectral_density(truncate(h, folner_set(z2, m, 1))));
    int converged = 0;
    for (double l : grid_on(-4.5, 4.5, 201)) {
      const double f5 = F[0].F(l), f10 = F[1].F(l), f20 = F[2].F(l);
      if (std::abs(f20 - f10) >= 1e-3) continue;
      ++converged;
      CHECK(f10 >= std::min(f5, f20) - 1e-3);
      CHECK(f10 <= std::max(f5, f20) + 1e-3);
    }
    CHECK(converged > 20);
  }
}

TEST_CASE("gap flags shrink as levels are added (flux 0 instance)") {
  const AlgebraElement h = build_named_operator("harper", z2, Multiplier::trivial(), 1);
  std::vector<SpectralDensity> densities;
  for (int m : {5, 10, 20}) densities.push_back(spectral_density(truncate(h, folner_set(z2, m, 1))));
  const auto grid = grid_on(-4.5, 4.5, 201);
  const auto coarse = flag_cells(detect_gaps({densities[0], densities[1]}, grid, 1e-3));
  const auto fine = flag_cells(detect_gaps(densities, grid, 1e-3));
  for (const auto& cell : fine)
    CHECK(std::find(coarse.begin(), coarse.end(), cell) != coarse.end());
  CHECK(fine.size() < coarse.size());
}

TEST_CASE("butterfly sweep") {
  const auto rows1 = butterfly_sweep(z2, 1, 1, 3);
  REQUIRE(rows1.size() == 1);
  CHECK(rows1[0].q == 1);
  CHECK(rows1[0].p == 0);
  CHECK(rows1[0].eigenvalues.size() == 49);

  const auto rows5 = butterfly_sweep(z2, 1, 5, 3);
  CHECK(rows5.size() == 10);  // 1 + phi(2) + phi(3) + phi(4) + phi(5)

  // spectrum symmetric under lambda -> -lambda for every flux
  for (const auto& row : rows5) {
    const auto& e = row.eigenvalues;
    for (std::size_t i = 0; i < e.size(); ++i)
      CHECK(std::abs(e[i] + e[e.size() - 1 - i]) <= 1e-9);
  }

  // deterministic across runs and across concurrency degrees
  const auto again = butterfly_sweep(z2, 1, 5, 3, 6000, 2);
  REQUIRE(again.size() == rows5.size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    CHECK(again[i].q == rows5[i].q);
    CHECK(again[i].p == rows5[i].p);
    for (std::size_t j = 0; j < again[i].eigenvalues.size(); ++j)
      CHECK(again[i].eigenvalues[j] == rows5[i].eigenvalues[j]);
  }
}

TEST_CASE("quotient multiplicity: cycle graph") {
  const GroupModel cyc8 = GroupModel::lattice_quotient({8});
  const AlgebraElement adj = build_named_operator("harper", cyc8, Multiplier::trivial(), 1);
  // eigenvalues 2 cos(2 pi k / 8); interior ones have multiplicity 2
  const auto m = quotient_multiplicity(adj, 0, 1, MultiplicityMode::Numeric);
  CHECK(m.multiplicity == 2);
  const auto sqrt2 = quotient_multiplicity(adj, 0, 1, MultiplicityMode::Exact);
  CHECK(sqrt2.multiplicity == 2);  // 2cos(pi/2) = 0 at k = 2, 6

  const auto top = quotient_multiplicity(adj, 2, 1, MultiplicityMode::Exact);
  CHECK(top.multiplicity == 1);
  const auto out = quotient_multiplicity(adj, 7, 1, MultiplicityMode::Exact);
  CHECK(out.multiplicity == 0);
}

TEST_CASE("quotient multiplicity: lamplighter exact table") {
  // frozen from the independent block/Bareiss enumeration
  const std::vector<std::int64_t> nullity0 = {2, 9, 22, 55, 126};
  const std::vector<std::int64_t> nullity2 = {2, 3, 8, 25, 56};
  for (int n = 2; n <= 6; ++n) {
    const GroupModel q = GroupModel::lamplighter_quotient(n);
    const AlgebraElement rw = build_named_operator("lamplighter_rw", q, Multiplier::trivial(), 1);
    const auto r0 = quotient_multiplicity(rw, 0, 1, MultiplicityMode::Exact);
    CHECK(r0.multiplicity == nullity0[static_cast<std::size_t>(n - 2)]);
    CHECK(r0.total_dim == n * (1ll << n));
    const auto r2 = quotient_multiplicity(rw, 2, 1, MultiplicityMode::Exact);
    CHECK(r2.multiplicity == nullity2[static_cast<std::size_t>(n - 2)]);
    // numeric clustering agrees where the spectral gap is resolvable
    const auto r0n = quotient_multiplicity(rw, 0, 1, MultiplicityMode::Numeric, 1e-7);
    CHECK(r0n.multiplicity == r0.multiplicity);
  }
}

TEST_CASE("lamplighter block path matches dense elimination on the delta basis") {
  for (int n = 3; n <= 4; ++n) {
    const GroupModel q = GroupModel::lamplighter_quotient(n);
    const AlgebraElement rw = build_named_operator("lamplighter_rw", q, Multiplier::trivial(), 1);
    const Truncation t = truncate(rw, folner_set(q, 1, 0));
    std::vector<std::vector<mpz_class>> m(static_cast<std::size_t>(t.matrix.rows()),
                                          std::vector<mpz_class>(static_cast<std::size_t>(t.matrix.cols())));
    for (Eigen::Index i = 0; i < t.matrix.rows(); ++i)
      for (Eigen::Index j = 0; j < t.matrix.cols(); ++j)
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            static_cast<long>(std::llround(t.matrix(i, j).real()));
    const auto [rank, nullity] = oracle::kernel_rank_exact(m);
    const auto blocks = quotient_multiplicity(rw, 0, 1, MultiplicityMode::Exact);
    CHECK(nullity == blocks.multiplicity);
  }
}

TEST_CASE("quotient multiplicity: cyclotomic elimination for twisted tori") {
  // flux 1/4 on Z_4^2: exact kernel ranks over Q(i) agree with clustering
  const GroupModel torus = GroupModel::lattice_quotient({4, 4});
  const Multiplier sigma = Multiplier::magnetic_z2(RationalAngle(0, 1), RationalAngle(1, 4));
  const AlgebraElement h = build_named_operator("harper", torus, sigma, 1);
  const SpectralDensity sd = spectral_density(truncate(h, folner_set(torus, 1, 0)));
  for (std::int64_t lam : {0, 2, 5}) {
    const auto exact = quotient_multiplicity(h, lam, 1, MultiplicityMode::Exact);
    std::int64_t numeric = 0;
    for (double e : sd.eigenvalues())
      if (std::abs(e - static_cast<double>(lam)) < 1e-8) ++numeric;
    CHECK(exact.multiplicity == numeric);
  }
}

TEST_CASE("exact mode rejects non-integer coefficients") {
  const GroupModel q = GroupModel::lamplighter_quotient(3);
  AlgebraElement a(q, Multiplier::trivial(), 1);
  BlockMatrix m(1, 1);
  m(0, 0) = 0.5;
  a.add(GroupElement::lamplighter({}, 0), m);
  CHECK_THROWS_AS(quotient_multiplicity(a, 0, 1, MultiplicityMode::Exact), domain_error);
}

TEST_CASE("spectral inclusion on the torus (flux 1/2, N = 4)") {
  const GroupModel torus = GroupModel::lattice_quotient({4, 4});
  const Multiplier sigma = Multiplier::magnetic_z2(RationalAngle(0, 1), RationalAngle(1, 2));
  const AlgebraElement h = build_named_operator("harper", torus, sigma, 1);
  const auto twisted = spectral_density(truncate(h, folner_set(torus, 1, 0)));
  const ExtensionLift lift = lift_to_extension(h);
  const auto lifted =
      spectral_density(truncate(lift.lifted, folner_set(lift.extension_model, 1, 0)));
  CHECK(lifted.tau_certificate_residual() < 1e-12);
  for (double l : twisted.eigenvalues()) {
    double best = 1e18;
    for (double e : lifted.eigenvalues()) best = std::min(best, std::abs(e - l));
    CHECK(best <= 1e-8);
  }
}

TEST_CASE("jump upper-semicontinuity surrogate on the lamplighter quotients") {
  // D_{2m}(0) <= D_m(0) + 1e-3 for the quotient family at m = 3, 4
  auto jump_at_zero = [](int n) {
    const GroupModel q = GroupModel::lamplighter_quotient(n);
    const AlgebraElement rw = build_named_operator("lamplighter_rw", q, Multiplier::trivial(), 1);
    return spectral_density(truncate(rw, folner_set(q, 1, 0))).D(0.0);
  };
  CHECK(jump_at_zero(6) <= jump_at_zero(3) + 1e-3);
  CHECK(jump_at_zero(8) <= jump_at_zero(4) + 1e-3);
}
