#pragma once

#include <span>
#include <vector>

#include "fnls/field.hpp"

namespace fnls {

// Linear part i u_t + nu u_xxxx + beta u_xx; its Fourier phase rate is nu xi^4 - beta xi^2.
class LinearSymbol {
 public:
  LinearSymbol(double nu = 1.0, double beta = 0.0);

  double nu() const { return nu_; }
  double beta() const { return beta_; }
  double rate(double xi) const {
    const double x2 = xi * xi;
    return nu_ * x2 * x2 - beta_ * x2;
  }

 private:
  double nu_;
  double beta_;
};

// Snapshots at t0 + j*dt on a common grid.
class SpaceTimeTrace {
 public:
  SpaceTimeTrace(double t0, double dt, std::vector<ComplexField> fields);

  const SpectralGrid& grid() const { return fields_.front().grid; }
  double t0() const { return t0_; }
  double dt() const { return dt_; }
  std::size_t size() const { return fields_.size(); }
  double time(std::size_t j) const { return t0_ + static_cast<double>(j) * dt_; }
  double t_end() const { return time(size() - 1); }
  const ComplexField& operator[](std::size_t j) const { return fields_[j]; }
  const std::vector<ComplexField>& fields() const { return fields_; }

 private:
  double t0_;
  double dt_;
  std::vector<ComplexField> fields_;
};

// Multiplies the spectrum by exp(i t (nu xi^4 - beta xi^2)).
ComplexField free_evolve(const ComplexField& f, double t, const LinearSymbol& sym = {});
// Same operation on an FFT-ordered spectrum, in place.
void free_evolve_spectrum(std::span<cplx> spectrum, const SpectralGrid& grid, double t,
                          const LinearSymbol& sym = {});

// Quadrature weights (in units of the sample spacing h = 1) for the integral of
// a smooth function from node 0 to position `tau` given `count` uniform samples.
// Whole-node targets use composite Simpson, with a 3/8 panel for odd interval
// counts and a one-interval cubic rule; fractional targets add the integral of
// the local cubic interpolant.
std::vector<double> integration_weights(std::size_t count, double tau);

// Integral from the trace start to t of exp(i(t-s)L) F(s) ds.
ComplexField duhamel_integral(const SpaceTimeTrace& forcing, double t, const LinearSymbol& sym = {});

}  // namespace fnls
