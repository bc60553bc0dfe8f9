#include "harper/truncation.hpp"

#include <algorithm>
#include <unordered_map>

namespace harper {

Truncation truncate(const AlgebraElement& a, const FolnerScheme& scheme, std::int64_t cap_dim) {
  if (!a.model().same_group(scheme.model))
    throw domain_error("truncate: operator and scheme over different groups");
  if (!a.certify_self_adjoint())
    throw domain_error("truncate: operator is not certified self-adjoint");

  const auto& X = scheme.set;
  const int d = a.block_size();
  const std::int64_t dim = static_cast<std::int64_t>(X.size()) * d;
  if (dim > cap_dim) throw resource_error("truncate: dimension " + std::to_string(dim) +
                                          " exceeds cap " + std::to_string(cap_dim));

  Truncation t;
  t.basis_elements = X;
  t.d = d;
  if (scheme.model.family() == Family::Extension) {
    t.kernel_order = scheme.model.ext_order();
    for (std::size_t i = 0; i < X.size(); ++i)
      if (X[i].ext_k() == 0) t.section.push_back(static_cast<std::int64_t>(i));
  } else {
    t.kernel_order = 1;
    t.section.resize(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) t.section[i] = static_cast<std::int64_t>(i);
  }
  t.base_count = static_cast<std::int64_t>(X.size()) / t.kernel_order;
  t.norm1_bound = a.norm1();

  std::unordered_map<GroupElement, std::int64_t, GroupElementHash> pos;
  pos.reserve(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) pos.emplace(X[i], static_cast<std::int64_t>(i));

  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
  // columns: T[(.,x),(.,y)] = A(x y^-1) sigma(x y^-1, y), x = g y over the support
  for (std::size_t iy = 0; iy < X.size(); ++iy) {
    const GroupElement& y = X[iy];
    for (const auto& [g, blk] : a.support()) {
      const GroupElement x = multiply(a.model(), g, y);
      auto it = pos.find(x);
      if (it == pos.end()) continue;
      M.block(it->second * d, static_cast<std::int64_t>(iy) * d, d, d) +=
          blk * a.sigma().evaluate(g, y);
    }
  }
  // Hermitian by construction for a self-adjoint operator; enforce exactly by
  // mirroring the lower triangle so that ||T - T*||_max = 0 identically.
  for (std::int64_t i = 0; i < dim; ++i) {
    M(i, i) = {M(i, i).real(), 0.0};
    for (std::int64_t j = 0; j < i; ++j) M(j, i) = std::conj(M(i, j));
  }
  t.matrix = std::move(M);
  t.real_valued = true;
  for (std::int64_t i = 0; i < dim && t.real_valued; ++i)
    for (std::int64_t j = 0; j < dim; ++j)
      if (t.matrix(i, j).imag() != 0.0) {
        t.real_valued = false;
        break;
      }
  return t;
}

Cplx truncated_moment(const AlgebraElement& a, const FolnerScheme& scheme, int k) {
  if (k < 0) throw domain_error("truncated_moment: negative power");
  const auto& X = scheme.set;
  std::unordered_map<GroupElement, bool, GroupElementHash> inX;
  for (const auto& x : X) inX.emplace(x, true);

  const int d = a.block_size();
  const std::int64_t r = scheme.model.family() == Family::Extension ? scheme.model.ext_order() : 1;
  Cplx total = 0.0;
  for (const auto& x : X) {
    for (int comp = 0; comp < d; ++comp) {
      VectorFS f = VectorFS::delta(scheme.model, x, d, comp);
      for (int step = 0; step < k; ++step) {
        VectorFS g = apply(a, f);
        VectorFS proj(scheme.model, d);
        for (const auto& [h, v] : g.support())
          if (inX.count(h)) proj.add(h, v);
        f = std::move(proj);
      }
      total += f.at(x)(comp);
    }
  }
  return total / static_cast<double>(X.size() / r) / static_cast<double>(r);
}

}  // namespace harper
