#include "harper/multiplicity.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "harper/cyclotomic.hpp"
#include "harper/density.hpp"

namespace harper {

namespace {

// fraction-free Bareiss elimination; returns the rank
std::int64_t bareiss_rank(std::vector<std::vector<mpz_class>>& m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  mpz_class prev(1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        m[i][j] = m[r][c] * m[i][j] - m[i][c] * m[r][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return static_cast<std::int64_t>(r);
}

// Gaussian elimination over Q(zeta); returns the rank
std::int64_t cyclo_rank(std::vector<std::vector<Cyclo>>& m) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(m[r], m[piv]);
    const Cyclo inv = m[r][c].inverse();
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m[i][c].is_zero()) continue;
      const Cyclo f = m[i][c] * inv;
      for (std::size_t j = c; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
    }
    ++r;
  }
  return static_cast<std::int64_t>(r);
}

mpz_class integer_coefficient(const Cplx& v) {
  if (v.imag() != 0.0) throw domain_error("exact mode requires real integer coefficients");
  const double r = std::round(v.real());
  if (r != v.real()) throw domain_error("exact mode requires integer coefficients");
  return mpz_class(static_cast<long>(r));
}

// Lamp-character decomposition of Z2 wr Z_n. In the basis
// e_{w,u} = sum_S (-1)^{w.S} delta_{(S,u)} every left translation acts
// monomially, so A - lambda splits into one integer block per orbit of the
// cyclic shift on lamp characters w.
std::int64_t lamplighter_block_nullity(const AlgebraElement& a, std::int64_t num,
                                       std::int64_t den) {
  const std::int64_t n = a.model().lamp_cycle();
  if (n > 24) throw resource_error("lamplighter quotient too large");
  const std::uint64_t W = 1ull << n;

  struct Term {
    std::int64_t t0;
    std::uint64_t s0;  // lamp mask of the support element
    mpz_class coef;
  };
  std::vector<Term> terms;
  for (const auto& [g, blk] : a.support()) {
    Term tm;
    tm.t0 = g.shift();
    tm.s0 = 0;
    for (std::int64_t p : g.lamps()) tm.s0 |= 1ull << p;
    tm.coef = integer_coefficient(blk(0, 0));
    terms.push_back(std::move(tm));
  }

  auto shift_mask = [&](std::uint64_t w, std::int64_t t) {
    // (sigma_t w)(y) = w(y - t)
    const std::int64_t s = ((t % n) + n) % n;
    return ((w << s) | (w >> (n - s))) & (W - 1);
  };

  std::vector<bool> seen(W, false);
  std::int64_t nullity = 0;
  for (std::uint64_t w0 = 0; w0 < W; ++w0) {
    if (seen[w0]) continue;
    std::vector<std::uint64_t> orbit;
    std::unordered_map<std::uint64_t, std::size_t> pos;
    std::uint64_t w = w0;
    do {
      pos.emplace(w, orbit.size());
      orbit.push_back(w);
      seen[w] = true;
      w = shift_mask(w, 1);
    } while (w != w0);

    const std::size_t dim = orbit.size() * static_cast<std::size_t>(n);
    std::vector<std::vector<mpz_class>> m(dim, std::vector<mpz_class>(dim, mpz_class(0)));
    for (std::size_t iw = 0; iw < orbit.size(); ++iw)
      for (std::int64_t u = 0; u < n; ++u) {
        const std::size_t col = iw * static_cast<std::size_t>(n) + static_cast<std::size_t>(u);
        for (const auto& tm : terms) {
          const std::uint64_t sw = shift_mask(orbit[iw], tm.t0);
          const int sign = __builtin_popcountll(sw & tm.s0) % 2 ? -1 : 1;
          const std::size_t row = pos.at(sw) * static_cast<std::size_t>(n) +
                                  static_cast<std::size_t>(((u + tm.t0) % n + n) % n);
          m[row][col] += sign * tm.coef * den;
        }
        m[col][col] -= num;
      }
    nullity += static_cast<std::int64_t>(dim) - bareiss_rank(m);
  }
  return nullity;
}

}  // namespace

std::vector<Eigen::MatrixXd> lamplighter_character_blocks(const AlgebraElement& a) {
  const GroupModel& model = a.model();
  if (model.family() != Family::Lamplighter || !model.finite() || a.block_size() != 1)
    throw domain_error("lamplighter_character_blocks: need a scalar lamplighter quotient operator");
  const std::int64_t n = model.lamp_cycle();
  if (n > 24) throw resource_error("lamplighter quotient too large");
  const std::uint64_t W = 1ull << n;

  auto shift_mask = [&](std::uint64_t w, std::int64_t t) {
    const std::int64_t s = ((t % n) + n) % n;
    return ((w << s) | (w >> (n - s))) & (W - 1);
  };

  std::vector<Eigen::MatrixXd> blocks;
  std::vector<bool> seen(W, false);
  for (std::uint64_t w0 = 0; w0 < W; ++w0) {
    if (seen[w0]) continue;
    std::vector<std::uint64_t> orbit;
    std::unordered_map<std::uint64_t, std::size_t> pos;
    std::uint64_t w = w0;
    do {
      pos.emplace(w, orbit.size());
      orbit.push_back(w);
      seen[w] = true;
      w = shift_mask(w, 1);
    } while (w != w0);

    const auto dim = static_cast<Eigen::Index>(orbit.size() * static_cast<std::size_t>(n));
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t iw = 0; iw < orbit.size(); ++iw)
      for (std::int64_t u = 0; u < n; ++u) {
        const auto col = static_cast<Eigen::Index>(iw * static_cast<std::size_t>(n) +
                                                   static_cast<std::size_t>(u));
        for (const auto& [g, blk] : a.support()) {
          std::uint64_t s0 = 0;
          for (std::int64_t p : g.lamps()) s0 |= 1ull << p;
          const std::uint64_t sw = shift_mask(orbit[iw], g.shift());
          const int sign = __builtin_popcountll(sw & s0) % 2 ? -1 : 1;
          const auto row = static_cast<Eigen::Index>(
              pos.at(sw) * static_cast<std::size_t>(n) +
              static_cast<std::size_t>(((u + g.shift()) % n + n) % n));
          b(row, col) += sign * blk(0, 0).real();
        }
      }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

MultiplicityResult quotient_multiplicity(const AlgebraElement& a, std::int64_t lambda_num,
                                         std::int64_t lambda_den, MultiplicityMode mode,
                                         double cluster_tol, std::int64_t exact_dense_cap) {
  if (lambda_den <= 0) throw domain_error("quotient_multiplicity: lambda denominator must be > 0");
  const GroupModel& model = a.model();
  if (!model.finite()) throw domain_error("quotient_multiplicity: quotient must be finite");
  const double lambda = static_cast<double>(lambda_num) / static_cast<double>(lambda_den);

  MultiplicityResult res;
  res.total_dim = model.group_order() * a.block_size();

  if (mode == MultiplicityMode::Numeric) {
    const FolnerScheme whole = folner_set(model, 1, 0);
    const Truncation t = truncate(a, whole, res.total_dim);
    const SpectralDensity sd = spectral_density(t);
    const double tol = cluster_tol * std::max(1.0, t.norm1_bound);
    std::int64_t count = 0;
    for (double e : sd.eigenvalues())
      if (std::abs(e - lambda) <= tol) ++count;
    res.multiplicity = count;
    res.normalized = static_cast<double>(count) / static_cast<double>(res.total_dim);
    return res;
  }

  // exact mode; outside the norm bound the kernel is empty
  if (std::abs(lambda) > a.norm1()) {
    res.multiplicity = 0;
    res.normalized = 0.0;
    return res;
  }

  if (model.family() == Family::Lamplighter && a.block_size() == 1 &&
      a.sigma().kind() == Multiplier::Kind::Trivial) {
    res.multiplicity = lamplighter_block_nullity(a, lambda_num, lambda_den);
    res.normalized = static_cast<double>(res.multiplicity) / static_cast<double>(res.total_dim);
    return res;
  }

  if (res.total_dim > exact_dense_cap)
    throw resource_error("quotient_multiplicity: exact dense elimination cap exceeded");
  if (!a.sigma().is_rational())
    throw domain_error("quotient_multiplicity: exact mode needs a rational multiplier");

  const std::int64_t conductor = lcm64(*a.sigma().order(), 1);
  const auto elems = enumerate_group(model);
  const int d = a.block_size();
  const std::size_t dim = elems.size() * static_cast<std::size_t>(d);
  std::unordered_map<GroupElement, std::size_t, GroupElementHash> pos;
  for (std::size_t i = 0; i < elems.size(); ++i) pos.emplace(elems[i], i);

  auto field = CycloField::make(conductor);
  const Cyclo zero = Cyclo::zero(field);
  std::vector<std::vector<Cyclo>> m(dim, std::vector<Cyclo>(dim, zero));
  const mpq_class lam(lambda_num, lambda_den);
  for (std::size_t iy = 0; iy < elems.size(); ++iy) {
    for (const auto& [g, blk] : a.support()) {
      const GroupElement x = multiply(model, g, elems[iy]);
      const std::size_t ix = pos.at(x);
      const auto ang = a.sigma().evaluate_exact(g, elems[iy]);
      if (!ang) throw domain_error("quotient_multiplicity: multiplier not exactly evaluable");
      const Cyclo phase = Cyclo::from_angle(field, *ang);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          const Cyclo coef = Cyclo::integer(field, integer_coefficient(blk(r, c)));
          const std::size_t row = ix * d + static_cast<std::size_t>(r);
          const std::size_t col = iy * d + static_cast<std::size_t>(c);
          m[row][col] = m[row][col] + coef * phase;
        }
    }
    for (int c = 0; c < d; ++c) {
      const std::size_t j = iy * d + static_cast<std::size_t>(c);
      m[j][j] = m[j][j] - Cyclo::rational(field, lam);
    }
  }
  res.multiplicity = static_cast<std::int64_t>(dim) - cyclo_rank(m);
  res.normalized = static_cast<double>(res.multiplicity) / static_cast<double>(res.total_dim);
  return res;
}

}  // namespace harper
