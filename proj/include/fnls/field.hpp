#pragma once

#include <span>
#include <vector>

#include "fnls/grid.hpp"

namespace fnls {

// Samples of a complex field on a grid.
struct ComplexField {
  SpectralGrid grid;
  std::vector<cplx> values;

  explicit ComplexField(const SpectralGrid& g);
  ComplexField(const SpectralGrid& g, std::vector<cplx> v);

  std::size_t size() const { return values.size(); }
};

// DFT coefficients in FFT order, with continuum-style scaling available on demand.
std::vector<cplx> to_spectrum(const ComplexField& f);
ComplexField from_spectrum(const SpectralGrid& grid, std::span<const cplx> spectrum);

ComplexField conjugate(const ComplexField& f);
ComplexField operator+(const ComplexField& a, const ComplexField& b);
ComplexField operator-(const ComplexField& a, const ComplexField& b);
ComplexField operator*(cplx c, const ComplexField& f);

// Physical-space L2 norm, sqrt(dx sum |u_j|^2).
double l2_norm(const ComplexField& f);
// Same norm evaluated from the DFT coefficients.
double spectral_l2_norm(const ComplexField& f);
double max_abs(const ComplexField& f);
// Relative L2 distance |a - b| / |ref|.
double relative_l2(const ComplexField& a, const ComplexField& b, const ComplexField& ref);

// Largest |u| on the first and last grid points relative to the peak; 0 for a zero field.
double boundary_ratio(const ComplexField& f, std::size_t edge_points = 1);

}  // namespace fnls
