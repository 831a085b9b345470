#pragma once

#include <functional>
#include <variant>

#include "fnls/bump.hpp"
#include "fnls/field.hpp"

namespace fnls {

namespace symbol {
struct Deriv { int order; };           // (i xi)^k
struct FracHomog { double s; };        // |xi|^s, zero mode mapped to 0
struct FracInhomog { double s; };      // (1 + |xi|)^s
}  // namespace symbol

using MultiplierSymbol = std::variant<symbol::Deriv, symbol::FracHomog, symbol::FracInhomog>;

cplx symbol_value(const MultiplierSymbol& sym, double xi);

// Multiplies the spectrum by m(xi); the Nyquist mode is always zeroed.
ComplexField apply_multiplier(const ComplexField& f, const std::function<cplx(double)>& m);
ComplexField fourier_multiplier(const ComplexField& f, const MultiplierSymbol& sym);
ComplexField derivative(const ComplexField& f, int order = 1);

namespace projection {
struct Shell { double N; };
struct Low { double N; };
struct High { double N; };
struct Plus {};
struct Minus {};
}  // namespace projection

using Projection = std::variant<projection::Shell, projection::Low, projection::High,
                                projection::Plus, projection::Minus>;

double projection_weight(const Projection& p, double xi, const BumpProfile& bump);
ComplexField lp_project(const ComplexField& f, const Projection& p, const BumpProfile& bump = {});

// Weighted spectral quadrature; the inhomogeneous weight is 1 + |xi|.
double sobolev_norm(const ComplexField& f, double s, bool homogeneous);

// Fraction of spectral L2 mass with |xi| in [lo, hi].
double spectral_mass_fraction(const ComplexField& f, double lo, double hi);

}  // namespace fnls
