#pragma once

#include <vector>

#include "fnls/bump.hpp"
#include "fnls/propagator.hpp"

namespace fnls {

// Space-time spectrum of a windowed trace and the dyadic modulation cutoffs
// psi_A(tau - rate(xi)).  The time transform uses exp(-i tau t), so the free
// solution sits on tau = rate(xi).  Modulations are wrapped into [-pi/dt, pi/dt).
class ModulationAnalysis {
 public:
  explicit ModulationAnalysis(const SpaceTimeTrace& trace, const LinearSymbol& sym = {},
                              const BumpProfile& bump = {}, double window_fraction = 0.8);

  double tau_spacing() const { return tau_spacing_; }
  double tau_max() const;
  bool resolvable(double A) const;

  // Lowest dyadic block lies below this scale and is handled by the low cutoff.
  double low_scale() const { return low_scale_; }
  // Dyadic A with 2 low_scale <= A <= top_scale; together with the low block they partition unity.
  std::vector<double> blocks() const;

  SpaceTimeTrace windowed() const;
  SpaceTimeTrace project(double A) const;
  SpaceTimeTrace project_low() const;

  // |Q_A u|^2_{L^2_{t,x}} of the windowed trace, from the space-time spectrum.
  double block_mass(double A) const;
  double low_mass() const;
  double total_mass() const;

  // (sum over blocks of (A^b |Q_A u|)^q)^{1/q}; the low block enters with A = low_scale.
  double xbq_norm(double b, double q) const;

  // Smallest dyadic A for which the window spectrum beyond |tau| >= A/2 holds < `tol` of its energy.
  double window_floor(double tol = 1e-6) const;

  double window(double t) const;

 private:
  double modulation(std::size_t m, std::size_t k) const;
  double weight_low(double d) const;
  SpaceTimeTrace synthesize(const std::vector<double>& mask) const;
  std::vector<double> mask_for(double A) const;
  std::vector<double> low_mask() const;
  double mass_with(const std::vector<double>& mask) const;

  SpectralGrid grid_;
  LinearSymbol sym_;
  BumpProfile bump_;
  double t0_;
  double dt_;
  std::size_t count_;
  double win_lo_;
  double win_hi_;
  double tau_spacing_;
  double low_scale_;
  double top_scale_;
  std::vector<cplx> spectrum_;  // [m * n + k]: temporal mode m, spatial mode k
};

}  // namespace fnls
