#pragma once

#include <vector>

#include "fnls/grid.hpp"

namespace fnls {

// fhat_N = N^(1/2 - s) on [N - 1/N, N + 1/N]; the derivative order enters the third iterate.
struct InflationDatum {
  double N = 16.0;
  double s = 0.0;
  int gamma = 1;

  double half_width() const { return 1.0 / N; }
  double amplitude() const;
  // Rate -2s + gamma - 1 of the third iterate (outer derivative).
  double expected_rate() const { return -2.0 * s + gamma - 1.0; }
};

// Outer: d^gamma(|u|^2 u).  Inner: d^gamma u * conj(d^gamma u) * d^gamma u.
enum class DerivativePlacement { outer, inner };

struct SimplexOptions {
  int points_per_band = 32;
  std::size_t time_samples = 101;
  double horizon = 1.0;
  DerivativePlacement placement = DerivativePlacement::outer;
};

// int_0^t exp(i omega s) ds, stable at omega t -> 0.
cplx resonance_factor(double omega, double t);

// Output frequencies xi = xi1 - xi2 + xi3 on the midpoint lattice of the band.
std::vector<double> simplex_output_frequencies(const InflationDatum& datum, int points_per_band);

// Fourier transform of the third Picard iterate at time t, in the interaction frame
// (the common factor exp(i t xi^4) is dropped), on simplex_output_frequencies.
std::vector<cplx> third_iterate_spectrum(const InflationDatum& datum, double t, const SimplexOptions& opts = {});

double third_iterate_sobolev(const InflationDatum& datum, double t, const SimplexOptions& opts = {});

// Max of third_iterate_sobolev over time_samples uniform times in [0, horizon].
double sup_third_iterate_sobolev(const InflationDatum& datum, const SimplexOptions& opts = {});

}  // namespace fnls
