#include "harper/oracle.hpp"

#include <cmath>

namespace harper::oracle {

namespace {

void walk_rec(const AlgebraElement& a, int depth, const GroupElement& prefix,
              const BlockMatrix& prod, const Cplx& phase, WalkPhaseSum& acc,
              std::uint64_t& budget) {
  if (depth == 0) {
    if (prefix == a.model().identity()) {
      acc.sum += phase * prod.trace();
      ++acc.closed_walks;
    }
    return;
  }
  for (const auto& [g, m] : a.support()) {
    if (budget-- == 0) throw resource_error("walk_moment: combinatorial cap exceeded");
    const Cplx step = a.sigma().evaluate(prefix, g);
    walk_rec(a, depth - 1, multiply(a.model(), prefix, g), BlockMatrix(prod * m), phase * step,
             acc, budget);
  }
}

}  // namespace

WalkPhaseSum walk_phase_sum(const AlgebraElement& a, int k, std::uint64_t walk_cap) {
  if (k < 0) throw domain_error("walk_moment: negative power");
  if (k > 8) throw resource_error("walk_moment: k exceeds cap 8");
  WalkPhaseSum acc;
  acc.k = k;
  if (k == 0) {
    acc.sum = static_cast<double>(a.block_size());
    acc.closed_walks = 1;
    return acc;
  }
  std::uint64_t budget = walk_cap;
  walk_rec(a, k, a.model().identity(),
           BlockMatrix::Identity(a.block_size(), a.block_size()), Cplx(1.0), acc, budget);
  return acc;
}

Cplx walk_moment(const AlgebraElement& a, int k, std::uint64_t walk_cap) {
  return walk_phase_sum(a, k, walk_cap).sum;
}

std::pair<std::int64_t, std::int64_t> kernel_rank_exact(std::vector<std::vector<mpz_class>> m) {
  if (m.empty()) return {0, 0};
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
  const auto rank = static_cast<std::int64_t>(r);
  return {rank, static_cast<std::int64_t>(cols) - rank};
}

std::pair<std::int64_t, std::int64_t> kernel_rank_exact(std::vector<std::vector<Cyclo>> m) {
  if (m.empty()) return {0, 0};
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
  const auto rank = static_cast<std::int64_t>(r);
  return {rank, static_cast<std::int64_t>(cols) - rank};
}

ExactOperator to_exact(const AlgebraElement& a, const CycloFieldPtr& field) {
  if (!a.sigma().is_rational() || field->conductor() % *a.sigma().order() != 0)
    throw domain_error("to_exact: field conductor incompatible with multiplier order");
  ExactOperator out{a.model(), a.sigma(), field, a.block_size(), {}};
  for (const auto& [g, m] : a.support()) {
    std::vector<Cyclo> blk;
    blk.reserve(static_cast<std::size_t>(a.block_size()) * a.block_size());
    for (int r = 0; r < a.block_size(); ++r)
      for (int c = 0; c < a.block_size(); ++c) {
        const Cplx v = m(r, c);
        if (v.imag() != 0.0 || std::round(v.real()) != v.real())
          throw domain_error("to_exact: coefficients must be integers");
        blk.push_back(Cyclo::integer(field, mpz_class(static_cast<long>(v.real()))));
      }
    out.support.emplace(g, std::move(blk));
  }
  return out;
}

ExactVector exact_apply(const ExactOperator& a, const ExactVector& f) {
  ExactVector out{f.model, f.field, f.d, {}};
  const Cyclo zero = Cyclo::zero(f.field);
  for (const auto& [g, blk] : a.support)
    for (const auto& [h, v] : f.support) {
      const auto ang = a.sigma.evaluate_exact(g, h);
      if (!ang) throw domain_error("exact_apply: multiplier not exactly evaluable");
      const Cyclo phase = Cyclo::from_angle(f.field, *ang);
      const GroupElement x = multiply(a.model, g, h);
      auto [it, inserted] = out.support.try_emplace(x, std::vector<Cyclo>(static_cast<std::size_t>(f.d), zero));
      for (int r = 0; r < f.d; ++r) {
        Cyclo s = zero;
        for (int c = 0; c < f.d; ++c)
          s = s + blk[static_cast<std::size_t>(r * f.d + c)] * v[static_cast<std::size_t>(c)];
        it->second[static_cast<std::size_t>(r)] = it->second[static_cast<std::size_t>(r)] + s * phase;
      }
    }
  return out;
}

Cyclo exact_trace(const ExactOperator& a) {
  const Cyclo zero = Cyclo::zero(a.field);
  auto it = a.support.find(a.model.identity());
  if (it == a.support.end()) return zero;
  Cyclo s = zero;
  for (int j = 0; j < a.d; ++j) s = s + it->second[static_cast<std::size_t>(j * a.d + j)];
  return s;
}

ExactOperator exact_multiply(const ExactOperator& a, const ExactOperator& b) {
  ExactOperator out{a.model, a.sigma, a.field, a.d, {}};
  const Cyclo zero = Cyclo::zero(a.field);
  for (const auto& [g, ma] : a.support)
    for (const auto& [h, mb] : b.support) {
      const auto ang = a.sigma.evaluate_exact(g, h);
      if (!ang) throw domain_error("exact_multiply: multiplier not exactly evaluable");
      const Cyclo phase = Cyclo::from_angle(a.field, *ang);
      const GroupElement k = multiply(a.model, g, h);
      auto [it, inserted] =
          out.support.try_emplace(k, std::vector<Cyclo>(static_cast<std::size_t>(a.d) * a.d, zero));
      for (int r = 0; r < a.d; ++r)
        for (int c = 0; c < a.d; ++c) {
          Cyclo s = zero;
          for (int j = 0; j < a.d; ++j)
            s = s + ma[static_cast<std::size_t>(r * a.d + j)] * mb[static_cast<std::size_t>(j * a.d + c)];
          auto& cell = it->second[static_cast<std::size_t>(r * a.d + c)];
          cell = cell + s * phase;
        }
    }
  return out;
}

bool exact_equal(const ExactVector& f, const ExactVector& g) {
  auto nonzero = [](const ExactVector& v) {
    std::map<GroupElement, std::vector<Cyclo>> out;
    for (const auto& [k, vals] : v.support) {
      bool z = true;
      for (const auto& c : vals)
        if (!c.is_zero()) {
          z = false;
          break;
        }
      if (!z) out.emplace(k, vals);
    }
    return out;
  };
  const auto a = nonzero(f), b = nonzero(g);
  if (a.size() != b.size()) return false;
  for (const auto& [k, vals] : a) {
    auto it = b.find(k);
    if (it == b.end()) return false;
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (!(vals[i] == it->second[i])) return false;
  }
  return true;
}

}  // namespace harper::oracle
