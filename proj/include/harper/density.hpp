#pragma once

#include <vector>

#include "harper/truncation.hpp"

namespace harper {

// Right-continuous eigenvalue counting function of a truncation, normalized
// by 1/(r #X) so that the total mass is d:
//   F(lambda) = tau_X(chi_(-inf,lambda](A^(X))),  D(lambda) = F(lambda) - F(lambda^-).
class SpectralDensity {
 public:
  SpectralDensity() = default;
  SpectralDensity(std::vector<double> eigenvalues, std::int64_t r_times_x, int d,
                  double cluster_tol);

  double F(double lambda) const;
  double D(double lambda) const;
  double total_mass() const;
  const std::vector<double>& eigenvalues() const { return eigs_; }
  double cluster_tol() const { return tol_; }
  // |tau_X(P) - full_trace(P)/(r #X)| at the median eigenvalue; 0 when the
  // certification was not run (trivial kernel)
  double tau_certificate_residual() const { return cert_; }

 private:
  friend SpectralDensity spectral_density(const Truncation&, double);
  std::vector<double> eigs_;  // ascending
  double mass_ = 0.0;         // per-eigenvalue mass 1/(r #X)
  int d_ = 1;
  double tol_ = 0.0;
  double cert_ = 0.0;
};

// Dense Hermitian eigendecomposition; tau_X of spectral projectors is
// evaluated as full-trace/(r #X), certified against the literal tau_X
// (identity-coset diagonal) when the kernel is nontrivial.
SpectralDensity spectral_density(const Truncation& t, double cluster_tol_factor = 1e-8);

// One flagged interval of a gap scan with its per-level mass sequence.
struct GapInterval {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::vector<double> masses;  // one entry per density level
};

// Flags grid cells (lambda_i, lambda_i+1] whose mass F(l2)-F(l1) is <= eps at
// the top level and non-increasing across levels at resolution eps
// (mass_{l+1} <= max(mass_l, eps)).
std::vector<GapInterval> detect_gaps(const std::vector<SpectralDensity>& densities,
                                     const std::vector<double>& grid, double eps);

}  // namespace harper
