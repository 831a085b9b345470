#pragma once

#include <vector>

#include "fnls/field.hpp"
#include "fnls/nonlinearity.hpp"

namespace fnls {

// Two-component field (u, w); built from u it holds (u, conj(u)).
struct PairField {
  ComplexField first;
  ComplexField second;

  static PairField from_field(const ComplexField& u);
};

// (v_x, -w_x)
PairField d1_apply(const PairField& v);
// -U(x) * int_x^{Xmax} (conj(u) v_y + u w_y) dy, Xmax the right end of the domain.
PairField d2_apply(const PairField& base, const PairField& v);
// (i/2)(D1 V + i D2(U, V))
PairField recursion_apply(const PairField& base, const PairField& v);

// First component of d/dx (-2i Lambda)^(2n-1) U for n in {1, 2}.
ComplexField hierarchy_rhs(const ComplexField& u, int n);
// hierarchy_rhs minus its linear part d^(2n) u.
ComplexField hierarchy_nonlinear_part(const ComplexField& u, int n);
// Nonlinearity G of i u_t + d^4 u = G read off the n = 2 flow: G = -(nonlinear part).
ComplexField hierarchy_nonlinearity(const ComplexField& u);

// Relative L2 gap between hierarchy_nonlinearity(u) and `spec` evaluated on u.
double hierarchy_vs_explicit(const ComplexField& u, const NonlinearitySpec& spec);
double hierarchy_vs_explicit(const ComplexField& u);

struct DegreeGap {
  std::size_t degree;
  double relative_gap;  // |flow part - explicit part| / |explicit part|
  double flow_norm;
  double explicit_norm;
};

// Splits both sides into homogeneous parts of degree 3, 5, 7 by exact
// interpolation in the amplitude and compares them part by part.
std::vector<DegreeGap> hierarchy_degree_gaps(const ComplexField& u, const NonlinearitySpec& spec);

// Decay precondition shared by the tail-integral operators.
inline constexpr double kDecayTolerance = 1e-10;

}  // namespace fnls
