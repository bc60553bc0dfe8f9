#include "harper/moments.hpp"

namespace harper {

Cplx exact_moment(const AlgebraElement& a, int k, int k_cap, std::size_t support_cap) {
  if (k < 0) throw domain_error("exact_moment: negative power");
  if (k > k_cap) throw resource_error("exact_moment: power exceeds cap");
  if (k == 0) return static_cast<double>(a.block_size());

  AlgebraElement power = a;
  for (int i = 1; i < k; ++i) {
    power = alg_multiply(power, a);
    if (power.support().size() > support_cap)
      throw resource_error("exact_moment: support blowup");
  }
  return trace(power);
}

}  // namespace harper
