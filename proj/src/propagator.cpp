#include "fnls/propagator.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fnls/error.hpp"
#include "fnls/fft.hpp"

namespace fnls {

LinearSymbol::LinearSymbol(double nu, double beta) : nu_(nu), beta_(beta) {
  if (!std::isfinite(nu) || !std::isfinite(beta)) throw ConfigError("linear symbol coefficients must be finite");
  if (nu == 0.0 && beta == 0.0) throw ConfigError("linear symbol needs nu or beta nonzero");
}

SpaceTimeTrace::SpaceTimeTrace(double t0, double dt, std::vector<ComplexField> fields)
    : t0_(t0), dt_(dt), fields_(std::move(fields)) {
  if (fields_.size() < 2) throw ConfigError("a trace needs at least two snapshots");
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ConfigError("trace step must be positive");
  for (const auto& f : fields_)
    if (!(f.grid == fields_.front().grid)) throw ConfigError("trace snapshots live on different grids");
}

void free_evolve_spectrum(std::span<cplx> spectrum, const SpectralGrid& grid, double t, const LinearSymbol& sym) {
  if (!std::isfinite(t)) throw ConfigError("evolution time must be finite");
  for (std::size_t j = 0; j < spectrum.size(); ++j) {
    if (grid.is_nyquist(j)) {
      spectrum[j] = 0.0;
      continue;
    }
    const double phase = t * sym.rate(grid.wavenumber(j));
    spectrum[j] *= cplx{std::cos(phase), std::sin(phase)};
  }
}

ComplexField free_evolve(const ComplexField& f, double t, const LinearSymbol& sym) {
  auto spec = to_spectrum(f);
  free_evolve_spectrum(spec, f.grid, t, sym);
  return from_spectrum(f.grid, spec);
}

namespace {

void add_simpson(std::vector<double>& w, std::size_t a, std::size_t b) {
  for (std::size_t j = a; j < b; j += 2) {
    w[j] += 1.0 / 3.0;
    w[j + 1] += 4.0 / 3.0;
    w[j + 2] += 1.0 / 3.0;
  }
}

// Integral over [m, m + theta] of the Lagrange interpolant through up to four nodes near m.
void add_partial(std::vector<double>& w, std::size_t m, double theta) {
  const std::size_t count = w.size();
  const std::size_t deg = std::min<std::size_t>(count, 4);
  std::size_t first = m >= 1 ? m - 1 : 0;
  if (first + deg > count) first = count - deg;
  static constexpr std::array<double, 2> gl_nodes{-0.57735026918962576, 0.57735026918962576};
  for (std::size_t i = 0; i < deg; ++i) {
    double integral = 0.0;
    for (double g : gl_nodes) {
      const double s = static_cast<double>(m) + 0.5 * theta * (1.0 + g);
      double basis = 1.0;
      for (std::size_t k = 0; k < deg; ++k) {
        if (k == i) continue;
        basis *= (s - static_cast<double>(first + k)) / static_cast<double>(static_cast<long>(i) - static_cast<long>(k));
      }
      integral += 0.5 * theta * basis;
    }
    w[first + i] += integral;
  }
}

}  // namespace

std::vector<double> integration_weights(std::size_t count, double tau) {
  if (count < 2) throw ConfigError("integration needs at least two samples");
  const double last = static_cast<double>(count - 1);
  constexpr double tol = 1e-9;
  if (tau < -tol || tau > last + tol) throw ConfigError("integration target outside the sample range");
  tau = std::clamp(tau, 0.0, last);
  std::vector<double> w(count, 0.0);
  auto m = static_cast<std::size_t>(std::floor(tau + tol));
  double theta = tau - static_cast<double>(m);
  if (theta < tol) theta = 0.0;
  if (m == count - 1) theta = 0.0;

  if (m == 1) {
    if (count >= 4) {
      w[0] += 9.0 / 24.0;
      w[1] += 19.0 / 24.0;
      w[2] += -5.0 / 24.0;
      w[3] += 1.0 / 24.0;
    } else if (count == 3) {
      w[0] += 5.0 / 12.0;
      w[1] += 8.0 / 12.0;
      w[2] += -1.0 / 12.0;
    } else {
      w[0] += 0.5;
      w[1] += 0.5;
    }
  } else if (m >= 2 && m % 2 == 0) {
    add_simpson(w, 0, m);
  } else if (m >= 3) {
    add_simpson(w, 0, m - 3);
    for (std::size_t k = 0; k < 4; ++k) w[m - 3 + k] += (k == 0 || k == 3 ? 3.0 : 9.0) / 8.0;
  }
  if (theta > 0.0) add_partial(w, m, theta);
  return w;
}

ComplexField duhamel_integral(const SpaceTimeTrace& forcing, double t, const LinearSymbol& sym) {
  const double span = forcing.t_end() - forcing.t0();
  if (!std::isfinite(t) || t < forcing.t0() - 1e-12 * std::max(1.0, span) ||
      t > forcing.t_end() + 1e-12 * std::max(1.0, span))
    throw ConfigError("Duhamel target time lies outside the trace");
  const auto& grid = forcing.grid();
  const auto w = integration_weights(forcing.size(), (t - forcing.t0()) / forcing.dt());
  std::vector<cplx> acc(grid.n(), cplx{});
  std::vector<cplx> spec(grid.n());
  for (std::size_t k = 0; k < forcing.size(); ++k) {
    if (w[k] == 0.0) continue;
    fft::forward(forcing[k].values, spec);
    free_evolve_spectrum(spec, grid, t - forcing.time(k), sym);
    const double wk = w[k] * forcing.dt();
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += wk * spec[j];
  }
  return from_spectrum(grid, acc);
}

}  // namespace fnls
