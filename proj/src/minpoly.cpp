#include "harper/minpoly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace harper {

mpz_class PolynomialZ::height() const {
  mpz_class h(0);
  for (const auto& c : coeffs) {
    mpz_class a = abs(c);
    if (a > h) h = a;
  }
  return h;
}

void PolynomialZ::make_primitive() {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  if (coeffs.empty()) return;
  mpz_class g(0);
  for (const auto& c : coeffs) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g != 0)
    for (auto& c : coeffs) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  if (coeffs.back() < 0)
    for (auto& c : coeffs) c = -c;
}

BigFloat PolynomialZ::evaluate(const BigFloat& x) const {
  BigFloat acc(x.precision());
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    acc = acc * x;
    mpfr_add_z(acc.raw(), acc.raw(), coeffs[i].get_mpz_t(), MPFR_RNDN);
  }
  return acc;
}

std::string PolynomialZ::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    if (coeffs[i] == 0) continue;
    mpz_class a = abs(coeffs[i]);
    if (!first) os << (coeffs[i] < 0 ? " - " : " + ");
    else if (coeffs[i] < 0) os << "-";
    first = false;
    if (a != 1 || i == 0) os << a.get_str();
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
  }
  if (first) os << "0";
  return os.str();
}

namespace {

using Basis = std::vector<std::vector<mpz_class>>;

mpq_class dot_q(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
  mpq_class s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

mpq_class dot_zq(const std::vector<mpz_class>& a, const std::vector<mpq_class>& b) {
  mpq_class s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += mpq_class(a[i]) * b[i];
  return s;
}

mpz_class round_q(const mpq_class& q) {
  // nearest integer
  mpz_class num = q.get_num(), den = q.get_den();
  mpz_class twice = 2 * num + den;  // floor((num + den/2)/den) trick below
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), twice.get_mpz_t(), mpz_class(2 * den).get_mpz_t());
  return r;
}

}  // namespace

void lll_reduce(Basis& basis) {
  const std::size_t k = basis.size();
  if (k < 2) return;
  const std::size_t dim = basis[0].size();

  std::vector<std::vector<mpq_class>> star(k, std::vector<mpq_class>(dim));
  std::vector<std::vector<mpq_class>> mu(k, std::vector<mpq_class>(k));
  std::vector<mpq_class> norm2(k);

  auto gso = [&]() {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t d = 0; d < dim; ++d) star[i][d] = mpq_class(basis[i][d]);
      for (std::size_t j = 0; j < i; ++j) {
        mu[i][j] = norm2[j] == 0 ? mpq_class(0) : dot_zq(basis[i], star[j]) / norm2[j];
        for (std::size_t d = 0; d < dim; ++d) star[i][d] -= mu[i][j] * star[j][d];
      }
      norm2[i] = dot_q(star[i], star[i]);
    }
  };
  gso();

  const mpq_class delta(3, 4);
  std::size_t i = 1;
  std::uint64_t guard = 0;
  while (i < k) {
    if (++guard > 100000) throw numeric_error("lll: too many iterations");
    // size reduction
    for (std::size_t j = i; j-- > 0;) {
      mpz_class r = round_q(mu[i][j]);
      if (r != 0)
        for (std::size_t d = 0; d < dim; ++d) basis[i][d] -= r * basis[j][d];
    }
    gso();
    // Lovasz condition
    if (i >= 1 && norm2[i] < (delta - mu[i][i - 1] * mu[i][i - 1]) * norm2[i - 1]) {
      std::swap(basis[i], basis[i - 1]);
      gso();
      if (i > 1) --i;
    } else {
      ++i;
    }
  }
}

MinPolyResult minimal_polynomial(const HighPrecValue& x, int max_degree, std::int64_t max_height) {
  if (max_degree < 1) throw domain_error("minimal_polynomial: max_degree must be >= 1");
  // the relation lattice needs roughly one scaled column digit per candidate
  // coefficient: (max_degree + 1) log2(max_height) plus guard bits
  const double need =
      (max_degree + 1) * std::log2(static_cast<double>(std::max<std::int64_t>(max_height, 2))) +
      64.0;
  if (static_cast<double>(x.precision_bits) < need)
    throw domain_error("minimal_polynomial: precision " + std::to_string(x.precision_bits) +
                       " bits below required " + std::to_string(static_cast<int>(need)));

  const long P = x.precision_bits - 16;  // embedding scale 2^P
  const mpz_class height_bound(static_cast<long>(max_height));

  MinPolyResult best;
  std::vector<bool> degree_searched(static_cast<std::size_t>(max_degree) + 1, false);

  for (int deg = 1; deg <= max_degree; ++deg) {
    degree_searched[static_cast<std::size_t>(deg)] = true;
    // lattice rows: (e_i | round(2^P x^i)), i = 0..deg
    Basis basis(static_cast<std::size_t>(deg) + 1,
                std::vector<mpz_class>(static_cast<std::size_t>(deg) + 2, mpz_class(0)));
    BigFloat xpow(1.0, x.value.precision());
    for (int i = 0; i <= deg; ++i) {
      basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
      BigFloat scaled = xpow.ldexp(P);
      mpz_class xi;
      mpfr_get_z(xi.get_mpz_t(), scaled.raw(), MPFR_RNDN);
      basis[static_cast<std::size_t>(i)].back() = xi;
      xpow = xpow * x.value;
    }
    lll_reduce(basis);

    for (const auto& row : basis) {
      PolynomialZ cand;
      cand.coeffs.assign(row.begin(), row.end() - 1);
      cand.make_primitive();
      if (cand.coeffs.size() < 2) continue;  // zero or constant
      if (cand.height() > height_bound) continue;
      const BigFloat val = cand.evaluate(x.value);
      const double lg = val.log2_abs();
      if (lg < -static_cast<double>(x.precision_bits) / 2.0) {
        best.status = MinPolyResult::Status::Found;
        best.poly = cand;
        best.p_of_x_log2 = lg;
        break;
      }
    }
    if (best.status == MinPolyResult::Status::Found) break;
  }

  if (best.status == MinPolyResult::Status::NotFound) return best;

  // Irreducibility over Q: exact rational-root test settles degree <= 3;
  // beyond that, minimality of the ascending-degree search plus the Mignotte
  // factor bound 2^(deg/2) * ||p||_2 within the height budget.
  const PolynomialZ& p = best.poly;
  const int deg = p.degree();
  auto pow_z = [](const mpz_class& b, int e) {
    mpz_class r(1);
    for (int i = 0; i < e; ++i) r *= b;
    return r;
  };
  auto has_rational_root = [&]() {
    if (p.coeffs.front() == 0) return true;  // x divides
    auto divisors = [](const mpz_class& v) {
      std::vector<mpz_class> out;
      mpz_class a = abs(v);
      for (mpz_class d(1); d * d <= a; ++d)
        if (a % d == 0) {
          out.push_back(d);
          out.push_back(a / d);
        }
      return out;
    };
    for (const auto& r : divisors(p.coeffs.front()))
      for (const auto& s : divisors(p.coeffs.back())) {
        for (int sign : {1, -1}) {
          // evaluate p(sign * r/s) * s^deg exactly
          mpz_class acc(0);
          mpz_class rs(sign * r);
          for (int i = deg; i >= 0; --i)
            acc = acc * rs + p.coeffs[static_cast<std::size_t>(i)] * pow_z(s, deg - i);
          if (acc == 0) return true;
        }
      }
    return false;
  };
  if (deg == 1) {
    best.irreducibility_verified = true;
  } else if (deg <= 3) {
    best.irreducibility_verified = !has_rational_root();
  } else {
    // Mignotte: any factor of degree <= deg/2 has height <= 2^(deg/2) ||p||_2
    mpq_class norm2(0);
    for (const auto& c : p.coeffs) norm2 += mpq_class(c) * mpq_class(c);
    const double bound = std::pow(2.0, deg / 2.0) * std::sqrt(norm2.get_d());
    best.irreducibility_verified = !has_rational_root() && bound <= static_cast<double>(max_height);
  }
  return best;
}

}  // namespace harper
