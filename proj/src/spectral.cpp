#include "fnls/spectral.hpp"

#include <cmath>

#include "fnls/error.hpp"

namespace fnls {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require_resolvable(double N, const SpectralGrid& grid) {
  if (!(N > 0.0) || !std::isfinite(N)) throw ConfigError("projection scale must be positive");
  if (!(2.0 * N < grid.max_wavenumber()))
    throw ResolutionError("dyadic scale N=" + std::to_string(N) + " is not resolvable: 2N >= Nyquist " +
                          std::to_string(grid.max_wavenumber()));
}

}  // namespace

cplx symbol_value(const MultiplierSymbol& sym, double xi) {
  return std::visit(
      overloaded{
          [xi](const symbol::Deriv& d) -> cplx {
            if (d.order < 0) throw ConfigError("derivative order must be nonnegative");
            cplx r{1.0, 0.0};
            const cplx ik{0.0, xi};
            for (int i = 0; i < d.order; ++i) r *= ik;
            return r;
          },
          [xi](const symbol::FracHomog& h) -> cplx {
            if (!std::isfinite(h.s)) throw ConfigError("symbol exponent must be finite");
            if (xi == 0.0) return h.s == 0.0 ? 1.0 : 0.0;
            return std::pow(std::abs(xi), h.s);
          },
          [xi](const symbol::FracInhomog& h) -> cplx {
            if (!std::isfinite(h.s)) throw ConfigError("symbol exponent must be finite");
            return std::pow(1.0 + std::abs(xi), h.s);
          }},
      sym);
}

ComplexField apply_multiplier(const ComplexField& f, const std::function<cplx(double)>& m) {
  auto spec = to_spectrum(f);
  const auto& g = f.grid;
  for (std::size_t j = 0; j < spec.size(); ++j)
    spec[j] = g.is_nyquist(j) ? cplx{} : spec[j] * m(g.wavenumber(j));
  return from_spectrum(g, spec);
}

ComplexField fourier_multiplier(const ComplexField& f, const MultiplierSymbol& sym) {
  symbol_value(sym, 1.0);  // validates parameters even for empty fields
  return apply_multiplier(f, [&sym](double xi) { return symbol_value(sym, xi); });
}

ComplexField derivative(const ComplexField& f, int order) {
  return fourier_multiplier(f, symbol::Deriv{order});
}

double projection_weight(const Projection& p, double xi, const BumpProfile& bump) {
  const double a = std::abs(xi);
  return std::visit(overloaded{[&](const projection::Shell& s) { return bump.psi(s.N, a); },
                               [&](const projection::Low& s) { return bump.phi(a / s.N); },
                               [&](const projection::High& s) { return 1.0 - bump.phi(a / s.N); },
                               [&](const projection::Plus&) { return xi >= 0.0 ? 1.0 : 0.0; },
                               [&](const projection::Minus&) { return xi <= 0.0 ? 1.0 : 0.0; }},
                    p);
}

ComplexField lp_project(const ComplexField& f, const Projection& p, const BumpProfile& bump) {
  std::visit(overloaded{[&](const projection::Shell& s) { require_resolvable(s.N, f.grid); },
                        [&](const projection::Low& s) { require_resolvable(s.N, f.grid); },
                        [&](const projection::High& s) { require_resolvable(s.N, f.grid); },
                        [](const auto&) {}},
             p);
  return apply_multiplier(f, [&](double xi) { return cplx{projection_weight(p, xi, bump), 0.0}; });
}

double sobolev_norm(const ComplexField& f, double s, bool homogeneous) {
  if (!std::isfinite(s)) throw ConfigError("Sobolev exponent must be finite");
  const auto spec = to_spectrum(f);
  const auto& g = f.grid;
  double acc = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    if (g.is_nyquist(j)) continue;
    const double a = std::abs(g.wavenumber(j));
    double w = 1.0;
    if (homogeneous) {
      if (a == 0.0) continue;
      w = std::pow(a, s);
    } else {
      w = std::pow(1.0 + a, s);
    }
    acc += w * w * std::norm(spec[j]);
  }
  return std::sqrt(acc * g.dx() / static_cast<double>(g.n()));
}

double spectral_mass_fraction(const ComplexField& f, double lo, double hi) {
  const auto spec = to_spectrum(f);
  const auto& g = f.grid;
  double in = 0.0, total = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const double m = std::norm(spec[j]);
    total += m;
    const double a = std::abs(g.wavenumber(j));
    if (!g.is_nyquist(j) && a >= lo && a <= hi) in += m;
  }
  return total > 0.0 ? in / total : 1.0;
}

}  // namespace fnls
