#include "harper/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace harper {

namespace {

// exact division of integer polynomials: a / b with b monic-leading
std::vector<mpz_class> poly_divide_exact(const std::vector<mpz_class>& a,
                                         const std::vector<mpz_class>& b) {
  std::vector<mpz_class> rem = a;
  std::vector<mpz_class> quot(a.size() - b.size() + 1, mpz_class(0));
  for (std::size_t i = a.size(); i-- >= b.size();) {
    const std::size_t qi = i - (b.size() - 1);
    mpz_class coef = rem[i] / b.back();
    quot[qi] = coef;
    for (std::size_t j = 0; j < b.size(); ++j) rem[qi + j] -= coef * b[j];
    if (i == b.size() - 1) break;
  }
  return quot;
}

std::vector<mpz_class> cyclotomic_polynomial(std::int64_t n,
                                             std::map<std::int64_t, std::vector<mpz_class>>& memo) {
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  // X^n - 1
  std::vector<mpz_class> num(static_cast<std::size_t>(n) + 1, mpz_class(0));
  num[0] = -1;
  num.back() = 1;
  for (std::int64_t d = 1; d < n; ++d)
    if (n % d == 0) num = poly_divide_exact(num, cyclotomic_polynomial(d, memo));
  memo[n] = num;
  return num;
}

}  // namespace

std::shared_ptr<const CycloField> CycloField::make(std::int64_t n) {
  if (n < 1) throw domain_error("cyclotomic field: conductor must be >= 1");
  if (n > 512) throw resource_error("cyclotomic field: conductor too large");
  auto f = std::make_shared<CycloField>();
  f->n_ = n;
  std::map<std::int64_t, std::vector<mpz_class>> memo;
  f->phi_ = cyclotomic_polynomial(n, memo);
  f->deg_ = static_cast<int>(f->phi_.size()) - 1;

  // reduce zeta^k mod Phi_n for all k
  f->zeta_pow_.assign(static_cast<std::size_t>(n), {});
  std::vector<mpq_class> cur(static_cast<std::size_t>(f->deg_), mpq_class(0));
  cur[0] = 1;
  for (std::int64_t k = 0; k < n; ++k) {
    f->zeta_pow_[static_cast<std::size_t>(k)] = cur;
    // multiply by zeta
    std::vector<mpq_class> next(cur.size(), mpq_class(0));
    mpq_class lead = cur.back();
    for (std::size_t i = cur.size() - 1; i > 0; --i) next[i] = cur[i - 1];
    next[0] = 0;
    if (lead != 0)
      for (int i = 0; i < f->deg_; ++i) next[static_cast<std::size_t>(i)] -= lead * f->phi_[static_cast<std::size_t>(i)];
    cur = std::move(next);
  }
  return f;
}

const std::vector<mpq_class>& CycloField::zeta_power(std::int64_t k) const {
  k %= n_;
  if (k < 0) k += n_;
  return zeta_pow_[static_cast<std::size_t>(k)];
}

Cyclo Cyclo::zero(CycloFieldPtr f) { return Cyclo(std::move(f)); }

Cyclo Cyclo::one(CycloFieldPtr f) {
  Cyclo c(std::move(f));
  c.c_[0] = 1;
  return c;
}

Cyclo Cyclo::integer(CycloFieldPtr f, const mpz_class& v) {
  Cyclo c(std::move(f));
  c.c_[0] = v;
  return c;
}

Cyclo Cyclo::rational(CycloFieldPtr f, const mpq_class& v) {
  Cyclo c(std::move(f));
  c.c_[0] = v;
  return c;
}

Cyclo Cyclo::root(CycloFieldPtr f, std::int64_t k) {
  Cyclo c(f);
  c.c_ = f->zeta_power(k);
  return c;
}

Cyclo Cyclo::from_angle(CycloFieldPtr f, const RationalAngle& a) {
  if (f->conductor() % a.den() != 0)
    throw domain_error("cyclotomic: angle denominator does not divide conductor");
  return root(std::move(f), a.num() * (f->conductor() / a.den()));
}

bool Cyclo::is_zero() const {
  if (!field_) return true;
  for (const auto& v : c_)
    if (v != 0) return false;
  return true;
}

Cyclo Cyclo::operator+(const Cyclo& o) const {
  Cyclo r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
  return r;
}

Cyclo Cyclo::operator-(const Cyclo& o) const {
  Cyclo r = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
  return r;
}

Cyclo Cyclo::operator-() const {
  Cyclo r = *this;
  for (auto& v : r.c_) v = -v;
  return r;
}

Cyclo Cyclo::operator*(const Cyclo& o) const {
  const int deg = field_->degree();
  std::vector<mpq_class> prod(static_cast<std::size_t>(2 * deg - 1), mpq_class(0));
  for (int i = 0; i < deg; ++i) {
    if (c_[static_cast<std::size_t>(i)] == 0) continue;
    for (int j = 0; j < deg; ++j)
      if (o.c_[static_cast<std::size_t>(j)] != 0)
        prod[static_cast<std::size_t>(i + j)] += c_[static_cast<std::size_t>(i)] * o.c_[static_cast<std::size_t>(j)];
  }
  // reduce mod Phi_n (monic)
  const auto& phi = field_->cyclotomic_poly();
  for (int i = 2 * deg - 2; i >= deg; --i) {
    mpq_class lead = prod[static_cast<std::size_t>(i)];
    if (lead == 0) continue;
    prod[static_cast<std::size_t>(i)] = 0;
    for (int j = 0; j < deg; ++j)
      prod[static_cast<std::size_t>(i - deg + j)] -= lead * phi[static_cast<std::size_t>(j)];
  }
  Cyclo r(field_);
  for (int i = 0; i < deg; ++i) r.c_[static_cast<std::size_t>(i)] = prod[static_cast<std::size_t>(i)];
  return r;
}

Cyclo Cyclo::conj() const {
  const std::int64_t n = field_->conductor();
  Cyclo r = zero(field_);
  for (int j = 0; j < field_->degree(); ++j) {
    if (c_[static_cast<std::size_t>(j)] == 0) continue;
    const auto& zp = field_->zeta_power(((n - 1) * j) % n);
    for (int i = 0; i < field_->degree(); ++i)
      r.c_[static_cast<std::size_t>(i)] += c_[static_cast<std::size_t>(j)] * zp[static_cast<std::size_t>(i)];
  }
  return r;
}

Cyclo Cyclo::inverse() const {
  if (is_zero()) throw domain_error("cyclotomic inverse of zero");
  // extended Euclid over Q[X]: u * this + v * Phi = 1
  using Poly = std::vector<mpq_class>;
  auto degree_of = [](const Poly& p) {
    for (std::size_t i = p.size(); i-- > 0;)
      if (p[i] != 0) return static_cast<int>(i);
    return -1;
  };
  auto trim = [&](Poly& p) { p.resize(static_cast<std::size_t>(degree_of(p) + 1)); };

  Poly r0(field_->cyclotomic_poly().size());
  for (std::size_t i = 0; i < r0.size(); ++i) r0[i] = field_->cyclotomic_poly()[i];
  Poly r1(c_.begin(), c_.end());
  trim(r1);
  Poly u0{mpq_class(0)}, u1{mpq_class(1)};  // coefficients of `this`

  while (true) {
    const int d1 = degree_of(r1);
    if (d1 < 0) throw domain_error("cyclotomic inverse: degenerate element");
    if (d1 == 0) break;
    // r0 = q*r1 + r2
    Poly q(static_cast<std::size_t>(degree_of(r0) - d1 + 1), mpq_class(0));
    Poly rem = r0;
    for (int i = degree_of(r0); i >= d1; --i) {
      mpq_class coef = rem[static_cast<std::size_t>(i)] / r1[static_cast<std::size_t>(d1)];
      if (coef == 0) continue;
      q[static_cast<std::size_t>(i - d1)] = coef;
      for (int j = 0; j <= d1; ++j)
        rem[static_cast<std::size_t>(i - d1 + j)] -= coef * r1[static_cast<std::size_t>(j)];
    }
    trim(rem);
    // u2 = u0 - q*u1
    Poly u2(std::max(u0.size(), q.size() + u1.size()), mpq_class(0));
    for (std::size_t i = 0; i < u0.size(); ++i) u2[i] = u0[i];
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = 0; j < u1.size(); ++j) u2[i + j] -= q[i] * u1[j];
    trim(u2);
    r0 = std::move(r1);
    r1 = std::move(rem);
    u0 = std::move(u1);
    u1 = std::move(u2);
  }
  // r1 is a nonzero constant: inverse = u1 / r1, reduced mod Phi
  Cyclo inv = zero(field_);
  const mpq_class scale = mpq_class(1) / r1[0];
  // u1 may have degree >= deg; reduce via zeta powers
  for (std::size_t j = 0; j < u1.size(); ++j) {
    if (u1[j] == 0) continue;
    const auto& zp = field_->zeta_power(static_cast<std::int64_t>(j) % field_->conductor());
    for (int i = 0; i < field_->degree(); ++i)
      inv.c_[static_cast<std::size_t>(i)] += scale * u1[j] * zp[static_cast<std::size_t>(i)];
  }
  return inv;
}

bool Cyclo::operator==(const Cyclo& o) const { return (*this - o).is_zero(); }

std::complex<double> Cyclo::to_complex() const {
  if (!field_) return {0.0, 0.0};
  const double w = 2.0 * M_PI / static_cast<double>(field_->conductor());
  std::complex<double> z = 0.0;
  for (int i = 0; i < field_->degree(); ++i)
    z += c_[static_cast<std::size_t>(i)].get_d() *
         std::complex<double>(std::cos(w * i), std::sin(w * i));
  return z;
}

}  // namespace harper
