#include "harper/butterfly.hpp"

#include <future>
#include <numeric>

#include "harper/density.hpp"

namespace harper {

std::vector<ButterflyRow> butterfly_sweep(const GroupModel& model, int d, int q_max, int level,
                                          std::int64_t cap_dim, int jobs) {
  if (q_max < 1) throw domain_error("butterfly_sweep: q_max must be >= 1");
  if (model.family() != Family::Lattice || model.lattice_dim() != 2)
    throw domain_error("butterfly_sweep: model must be a rank-2 lattice");

  std::vector<std::pair<std::int64_t, std::int64_t>> fluxes;
  fluxes.emplace_back(1, 0);
  for (std::int64_t q = 2; q <= q_max; ++q)
    for (std::int64_t p = 1; p < q; ++p)
      if (std::gcd(p, q) == 1) fluxes.emplace_back(q, p);

  const FolnerScheme scheme = folner_set(model, level, 0);
  auto eval = [&](std::size_t i) {
    const auto [q, p] = fluxes[i];
    const Multiplier sigma =
        Multiplier::magnetic_z2(RationalAngle(0, 1), RationalAngle(p, q));
    const AlgebraElement a = build_named_operator("harper", model, sigma, d);
    const Truncation t = truncate(a, scheme, cap_dim);
    ButterflyRow row;
    row.q = q;
    row.p = p;
    row.eigenvalues = spectral_density(t).eigenvalues();
    return row;
  };

  std::vector<ButterflyRow> rows(fluxes.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < fluxes.size(); ++i) rows[i] = eval(i);
  } else {
    std::vector<std::future<ButterflyRow>> futs(fluxes.size());
    std::size_t next = 0;
    while (next < fluxes.size()) {
      const std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(jobs),
                                                      fluxes.size() - next);
      for (std::size_t j = 0; j < batch; ++j)
        futs[next + j] = std::async(std::launch::async, eval, next + j);
      for (std::size_t j = 0; j < batch; ++j) rows[next + j] = futs[next + j].get();
      next += batch;
    }
  }
  return rows;
}

}  // namespace harper
