#pragma once

#include <vector>

#include "fnls/bump.hpp"
#include "fnls/field.hpp"
#include "fnls/propagator.hpp"

namespace fnls {

enum class PairSign { plus, minus };

// Frequency-restricted product: pairs (xi1, xi2) weighted by psi_L(xi1 +/- xi2).
// Normalized so that the sum over all dyadic L of the minus version is f*g
// without the xi1 = xi2 diagonal.  Direct double sum over nonzero coefficients;
// throws ResolutionError when a nonzero product falls outside the grid band.
ComplexField rl_bilinear(const ComplexField& f, const ComplexField& g, double L, PairSign sign,
                         const BumpProfile& bump = {});

// Dealiased pointwise product (reference for the reconstruction property).
ComplexField exact_product(const ComplexField& f, const ComplexField& g);

// Precomputed pair list for evaluating |R_L(e^{it rate1} f, e^{it rate2} g)|_{L^2_x}
// at many times.  Pair amplitudes, output slots and phase rates are fixed; a
// time sweep rotates the phases incrementally.
class PairSweep {
 public:
  // `first` and `second` are FFT-ordered spectra on `grid`; rate2_sign = -1 evolves
  // the second argument backwards (the conjugated configuration).
  PairSweep(const SpectralGrid& grid, const std::vector<cplx>& first, const std::vector<cplx>& second, double L,
            PairSign sign, const LinearSymbol& sym, double rate2_sign, const BumpProfile& bump = {});

  std::size_t pair_count() const { return amp_.size(); }
  // Squared L^2_x norms at t_j = t0 + j dt, j < count.
  std::vector<double> squared_norms(double t0, double dt, std::size_t count) const;
  double max_phase_rate_spread() const { return rate_spread_; }

 private:
  SpectralGrid grid_;
  std::vector<cplx> amp_;
  std::vector<double> rate_;
  std::vector<std::size_t> slot_;
  std::size_t slot_count_ = 0;
  double rate_spread_ = 0.0;
};

}  // namespace fnls
