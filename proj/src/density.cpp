#include "harper/density.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

namespace harper {

SpectralDensity::SpectralDensity(std::vector<double> eigenvalues, std::int64_t r_times_x, int d,
                                 double cluster_tol)
    : eigs_(std::move(eigenvalues)), d_(d), tol_(cluster_tol) {
  std::sort(eigs_.begin(), eigs_.end());
  mass_ = 1.0 / static_cast<double>(r_times_x);
}

double SpectralDensity::F(double lambda) const {
  const auto it = std::upper_bound(eigs_.begin(), eigs_.end(), lambda);
  return static_cast<double>(it - eigs_.begin()) * mass_;
}

double SpectralDensity::D(double lambda) const {
  const auto lo = std::lower_bound(eigs_.begin(), eigs_.end(), lambda - tol_);
  const auto hi = std::upper_bound(eigs_.begin(), eigs_.end(), lambda + tol_);
  return static_cast<double>(hi - lo) * mass_;
}

double SpectralDensity::total_mass() const { return static_cast<double>(eigs_.size()) * mass_; }

SpectralDensity spectral_density(const Truncation& t, double cluster_tol_factor) {
  const std::int64_t n = t.matrix.rows();
  if (n == 0) throw domain_error("spectral_density: empty truncation");

  std::vector<double> eigs(static_cast<std::size_t>(n));
  double cert = 0.0;
  const bool certify = t.kernel_order > 1;

  // cut index near the median that does not split a degenerate eigenspace
  // (otherwise the first-k column span is not a spectral projector)
  auto gap_cut = [&](const auto& ev) -> std::int64_t {
    const double tol = 1e-9 * std::max(1.0, t.norm1_bound);
    for (std::int64_t off = 0; off < n / 2; ++off)
      for (std::int64_t k : {n / 2 + off, n / 2 - off})
        if (k > 0 && k < n && ev(k) - ev(k - 1) > tol) return k;
    return 0;
  };

  if (t.real_valued) {
    const Eigen::MatrixXd R = t.matrix.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        R, certify ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw numeric_error("eigensolver failed to converge");
    for (std::int64_t i = 0; i < n; ++i) eigs[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    if (certify) {
      const std::int64_t cut = gap_cut(es.eigenvalues());
      double lit = 0.0;
      for (std::int64_t s : t.section)
        for (int a = 0; a < t.d; ++a)
          lit += es.eigenvectors().row(s * t.d + a).head(cut).squaredNorm();
      lit /= static_cast<double>(t.base_count);
      cert = std::abs(lit - static_cast<double>(cut) /
                                static_cast<double>(t.base_count * t.kernel_order));
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        t.matrix, certify ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw numeric_error("eigensolver failed to converge");
    for (std::int64_t i = 0; i < n; ++i) eigs[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    if (certify) {
      const std::int64_t cut = gap_cut(es.eigenvalues());
      double lit = 0.0;
      for (std::int64_t s : t.section)
        for (int a = 0; a < t.d; ++a)
          lit += es.eigenvectors().row(s * t.d + a).head(cut).squaredNorm();
      lit /= static_cast<double>(t.base_count);
      cert = std::abs(lit - static_cast<double>(cut) /
                                static_cast<double>(t.base_count * t.kernel_order));
    }
  }

  SpectralDensity sd(std::move(eigs), t.base_count * t.kernel_order, t.d,
                     cluster_tol_factor * std::max(t.norm1_bound, 1.0));
  sd.cert_ = cert;
  return sd;
}

std::vector<GapInterval> detect_gaps(const std::vector<SpectralDensity>& densities,
                                     const std::vector<double>& grid, double eps) {
  if (densities.size() < 2) throw domain_error("detect_gaps: need at least 2 levels");
  if (!std::is_sorted(grid.begin(), grid.end())) throw domain_error("detect_gaps: grid not sorted");

  std::vector<GapInterval> out;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    std::vector<double> masses;
    masses.reserve(densities.size());
    for (const auto& dns : densities) masses.push_back(dns.F(grid[i + 1]) - dns.F(grid[i]));
    bool flagged = masses.back() <= eps;
    for (std::size_t l = 0; l + 1 < masses.size() && flagged; ++l)
      flagged = masses[l + 1] <= std::max(masses[l], eps);
    if (flagged) out.push_back({grid[i], grid[i + 1], std::move(masses)});
  }
  return out;
}

}  // namespace harper
