#pragma once

#include <cstdint>
#include <vector>

#include "harper/algebra.hpp"

namespace harper {

struct ButterflyRow {
  std::int64_t q = 1;
  std::int64_t p = 0;  // reduced flux p/q in [0,1)
  std::vector<double> eigenvalues;  // ascending
};

// Harper spectra over all reduced fluxes p/q with q <= q_max, on the level-m
// box truncation of Z^2. Rows sorted by (q, p); evaluation may run on
// `jobs` threads, assembly order is fixed.
std::vector<ButterflyRow> butterfly_sweep(const GroupModel& model, int d, int q_max, int level,
                                          std::int64_t cap_dim = 6000, int jobs = 1);

}  // namespace harper
