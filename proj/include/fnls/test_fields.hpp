#pragma once

#include <cstdint>
#include <functional>
#include <variant>

#include "fnls/field.hpp"
#include "fnls/inflation.hpp"

namespace fnls {

namespace field_kind {
// a exp(-((x - x0)/width)^2) exp(i k0 x)
struct Gaussian { double a = 1.0, x0 = 0.0, k0 = 0.0, width = 1.0; };
// a sech((x - x0)/width) exp(i k0 x)
struct Sech { double a = 1.0, x0 = 0.0, k0 = 0.0, width = 1.0; };
// psi_N(|xi|) * sum of four random modulated translates within 2/N of the origin.
struct RandomBand { double N = 1.0; std::uint64_t seed = 0; };
// psi_N(|xi|) phi(2 (xi - center) / half_width) * four random translates within 1/half_width.
struct RandomWindow { double N = 1.0; double center = 0.0; double half_width = 1.0; std::uint64_t seed = 0; };
// Indicator band of the inflation datum snapped to the frequency lattice.
struct Inflation { InflationDatum datum; };
}  // namespace field_kind

using TestFieldKind = std::variant<field_kind::Gaussian, field_kind::Sech, field_kind::RandomBand,
                                   field_kind::RandomWindow, field_kind::Inflation>;

ComplexField make_test_field(const TestFieldKind& kind, const SpectralGrid& grid);

// Field whose continuum transform (2 pi)^(-1/2) int u e^{-i x xi} dx equals `fhat` on the lattice.
ComplexField from_continuum_spectrum(const SpectralGrid& grid, const std::function<cplx(double)>& fhat);

}  // namespace fnls
