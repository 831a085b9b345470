#pragma once

#include <span>
#include <vector>

#include "fnls/grid.hpp"

namespace fnls {

// Fundamental solution K(t,x) = (2 pi)^(-1/2) int exp(i(x xi + t xi^4)) dxi with the
// integrand tapered by exp(-(xi/cutoff)^8).  The tapered integral is evaluated
// exactly on a ray rotated into the sector where exp(i t xi^4) decays.
std::vector<cplx> kernel_profile(double t, std::span<const double> xs, double cutoff);

struct KernelEvaluation {
  std::vector<cplx> values;  // at the requested cutoff
  double doubling_delta;     // max change over two successive cutoff doublings
};

KernelEvaluation kernel_profile_checked(double t, std::span<const double> xs, double cutoff);

// K(1,0) = 2 Gamma(5/4) exp(i pi/8) / sqrt(2 pi).
cplx kernel_origin_value();

}  // namespace fnls
