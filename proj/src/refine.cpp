#include "harper/refine.hpp"

#include <vector>

#include "harper/rng.hpp"

namespace harper {

namespace {

// Dense LU with partial pivoting over BigComplex.
struct BigLU {
  std::int64_t n = 0;
  std::vector<BigComplex> lu;
  std::vector<std::int64_t> perm;

  BigLU(std::vector<BigComplex> m, std::int64_t n_) : n(n_), lu(std::move(m)), perm(n_) {
    for (std::int64_t i = 0; i < n; ++i) perm[i] = i;
    for (std::int64_t c = 0; c < n; ++c) {
      std::int64_t piv = c;
      BigFloat best = lu[static_cast<std::size_t>(c * n + c)].abs2();
      for (std::int64_t i = c + 1; i < n; ++i) {
        BigFloat cand = lu[static_cast<std::size_t>(i * n + c)].abs2();
        if (cand > best) {
          best = cand;
          piv = i;
        }
      }
      if (best.is_zero()) throw numeric_error("refine: singular shift matrix");
      if (piv != c) {
        for (std::int64_t j = 0; j < n; ++j)
          std::swap(lu[static_cast<std::size_t>(c * n + j)], lu[static_cast<std::size_t>(piv * n + j)]);
        std::swap(perm[c], perm[piv]);
      }
      const BigComplex inv = BigComplex(BigFloat(1.0, lu[0].re.precision()), BigFloat(0.0, 2)) /
                             lu[static_cast<std::size_t>(c * n + c)];
      for (std::int64_t i = c + 1; i < n; ++i) {
        BigComplex f = lu[static_cast<std::size_t>(i * n + c)] * inv;
        lu[static_cast<std::size_t>(i * n + c)] = f;
        for (std::int64_t j = c + 1; j < n; ++j)
          lu[static_cast<std::size_t>(i * n + j)] =
              lu[static_cast<std::size_t>(i * n + j)] - f * lu[static_cast<std::size_t>(c * n + j)];
      }
    }
  }

  std::vector<BigComplex> solve(const std::vector<BigComplex>& b) const {
    std::vector<BigComplex> y;
    y.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) y.push_back(b[static_cast<std::size_t>(perm[i])]);
    for (std::int64_t i = 0; i < n; ++i)
      for (std::int64_t j = 0; j < i; ++j)
        y[static_cast<std::size_t>(i)] =
            y[static_cast<std::size_t>(i)] - lu[static_cast<std::size_t>(i * n + j)] * y[static_cast<std::size_t>(j)];
    for (std::int64_t i = n - 1; i >= 0; --i) {
      for (std::int64_t j = i + 1; j < n; ++j)
        y[static_cast<std::size_t>(i)] =
            y[static_cast<std::size_t>(i)] - lu[static_cast<std::size_t>(i * n + j)] * y[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] =
          y[static_cast<std::size_t>(i)] / lu[static_cast<std::size_t>(i * n + i)];
    }
    return y;
  }
};

}  // namespace

HighPrecValue refine_eigenvalue(const Truncation& t, double lambda0, int precision_bits,
                                int max_iterations) {
  if (precision_bits < 64) throw domain_error("refine: precision must be >= 64 bits");
  const std::int64_t n = t.matrix.rows();
  const mpfr_prec_t prec = precision_bits + 32;

  std::vector<BigComplex> mat;
  mat.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j)
      mat.emplace_back(BigFloat(t.matrix(i, j).real(), prec), BigFloat(t.matrix(i, j).imag(), prec));

  auto matvec = [&](const std::vector<BigComplex>& v) {
    std::vector<BigComplex> out(static_cast<std::size_t>(n), BigComplex(prec));
    for (std::int64_t i = 0; i < n; ++i) {
      BigComplex s(prec);
      for (std::int64_t j = 0; j < n; ++j)
        s = s + mat[static_cast<std::size_t>(i * n + j)] * v[static_cast<std::size_t>(j)];
      out[static_cast<std::size_t>(i)] = s;
    }
    return out;
  };

  auto shifted = [&](const BigFloat& mu) {
    std::vector<BigComplex> m = mat;
    for (std::int64_t i = 0; i < n; ++i) {
      auto& dd = m[static_cast<std::size_t>(i * n + i)];
      dd.re = dd.re - mu;
    }
    return m;
  };

  // a shift hitting an eigenvalue exactly makes the factorization singular;
  // nudge it by an amount far below the target accuracy
  auto factor_near = [&](BigFloat mu_try) {
    for (int attempt = 0; attempt < 3; ++attempt) {
      try {
        return std::make_pair(std::make_unique<BigLU>(shifted(mu_try), n), mu_try);
      } catch (const numeric_error&) {
        mu_try = mu_try + BigFloat(1.0, prec).ldexp(-(precision_bits - 16 - 8 * attempt));
      }
    }
    return std::make_pair(std::make_unique<BigLU>(shifted(mu_try), n), mu_try);
  };

  BigFloat mu(lambda0, prec);
  auto [lu, mu_used] = factor_near(mu);
  mu = mu_used;

  Rng rng(0x5eedULL ^ static_cast<std::uint64_t>(n));
  std::vector<BigComplex> v(static_cast<std::size_t>(n), BigComplex(prec));
  for (auto& x : v) x.re = BigFloat(uniform_unit(rng) - 0.5, prec);

  BigFloat lambda = mu;
  double res_log2 = 0.0;
  bool refactored_coarse = false, refactored_fine = false;
  const double target = -(static_cast<double>(precision_bits) - 10.0);

  for (int iter = 0; iter < max_iterations; ++iter) {
    v = lu->solve(v);
    // normalize by the largest component
    BigFloat nrm2(prec);
    for (const auto& x : v) nrm2 += x.abs2();
    const BigFloat scale = sqrt(nrm2);
    for (auto& x : v) x = BigComplex{x.re / scale, x.im / scale};

    // Rayleigh quotient and residual
    const auto tv = matvec(v);
    BigComplex rq(prec);
    for (std::int64_t i = 0; i < n; ++i)
      rq = rq + v[static_cast<std::size_t>(i)].conj() * tv[static_cast<std::size_t>(i)];
    lambda = rq.re;  // Hermitian
    BigFloat rnorm(prec);
    for (std::int64_t i = 0; i < n; ++i) {
      BigComplex d = tv[static_cast<std::size_t>(i)];
      d.re = d.re - lambda * v[static_cast<std::size_t>(i)].re;
      d.im = d.im - lambda * v[static_cast<std::size_t>(i)].im;
      rnorm += d.abs2();
    }
    res_log2 = sqrt(rnorm).log2_abs();
    if (res_log2 <= target)
      return {lambda, res_log2, precision_bits};

    // re-factor at the Rayleigh shift once the iteration has locked in
    if (!refactored_coarse && res_log2 < -30.0) {
      std::tie(lu, mu) = factor_near(lambda);
      refactored_coarse = true;
    } else if (!refactored_fine && res_log2 < -0.45 * precision_bits) {
      std::tie(lu, mu) = factor_near(lambda);
      refactored_fine = true;
    }
  }
  throw numeric_error("refine: no convergence (residual 2^" + std::to_string(res_log2) +
                      "); shift may be equidistant from clustered eigenvalues");
}

}  // namespace harper
