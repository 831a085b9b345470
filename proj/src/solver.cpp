#include "fnls/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fnls/error.hpp"
#include "fnls/fft.hpp"
#include "fnls/spectral.hpp"

namespace fnls {

void SolveConfig::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("final time T must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step dt must be positive");
  if (dt > T * (1.0 + 1e-12)) throw ConfigError("time step exceeds final time");
  if (record_every < 1) throw ConfigError("record_every must be at least 1");
  const std::size_t n = steps();
  if (n % static_cast<std::size_t>(record_every) != 0)
    throw ConfigError("record_every must divide the number of steps " + std::to_string(n));
}

std::size_t SolveConfig::steps() const {
  const double ratio = T / dt;
  const auto n = static_cast<std::size_t>(std::llround(ratio));
  if (n == 0 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio)
    throw ConfigError("T must be an integer multiple of dt");
  return n;
}

namespace {

// Phase factors exp(i t rate(xi)) for a fixed t on the FFT-ordered lattice.
std::vector<cplx> phase_table(const SpectralGrid& grid, const LinearSymbol& sym, double t) {
  std::vector<cplx> e(grid.n());
  for (std::size_t j = 0; j < grid.n(); ++j) {
    if (grid.is_nyquist(j)) {
      e[j] = 0.0;
      continue;
    }
    const double p = t * sym.rate(grid.wavenumber(j));
    e[j] = {std::cos(p), std::sin(p)};
  }
  return e;
}

// F[-i G(F^{-1} v)]
class NonlinearTerm {
 public:
  NonlinearTerm(const NonlinearitySpec& spec, const SpectralGrid& grid) : spec_(spec), grid_(grid), work_(grid) {}

  void operator()(const std::vector<cplx>& vhat, std::vector<cplx>& out) {
    fft::inverse(vhat, work_.values);
    const auto g = evaluate_nonlinearity(spec_, work_);
    fft::forward(g.values, out);
    for (auto& c : out) c *= cplx{0.0, -1.0};
  }

 private:
  const NonlinearitySpec& spec_;
  SpectralGrid grid_;
  ComplexField work_;
};

double spectrum_l2(const std::vector<cplx>& s, const SpectralGrid& grid) {
  double acc = 0.0;
  for (const auto& c : s) acc += std::norm(c);
  return std::sqrt(acc * grid.dx() / static_cast<double>(grid.n()));
}

}  // namespace

SpaceTimeTrace simulate(const ComplexField& u0, const SolveConfig& cfg) {
  cfg.validate();
  const auto& grid = u0.grid;
  const std::size_t n = grid.n();
  const std::size_t steps = cfg.steps();
  const double dt = cfg.dt;
  const auto half = phase_table(grid, cfg.sym, 0.5 * dt);
  const auto full = phase_table(grid, cfg.sym, dt);

  std::vector<ComplexField> snapshots;
  snapshots.reserve(steps / static_cast<std::size_t>(cfg.record_every) + 1);
  snapshots.push_back(u0);

  auto uh = to_spectrum(u0);
  uh[n / 2] = 0.0;
  const double initial = spectrum_l2(uh, grid);
  NonlinearTerm nl(cfg.spec, grid);
  const bool linear_only = cfg.spec.is_zero();
  std::vector<cplx> k1(n), k2(n), k3(n), k4(n), stage(n);

  for (std::size_t s = 1; s <= steps; ++s) {
    if (linear_only) {
      for (std::size_t j = 0; j < n; ++j) uh[j] *= full[j];
    } else {
      nl(uh, k1);
      for (std::size_t j = 0; j < n; ++j) stage[j] = half[j] * (uh[j] + 0.5 * dt * k1[j]);
      nl(stage, k2);
      for (std::size_t j = 0; j < n; ++j) stage[j] = half[j] * uh[j] + 0.5 * dt * k2[j];
      nl(stage, k3);
      for (std::size_t j = 0; j < n; ++j) stage[j] = full[j] * uh[j] + dt * half[j] * k3[j];
      nl(stage, k4);
      for (std::size_t j = 0; j < n; ++j)
        uh[j] = full[j] * uh[j] + dt / 6.0 * (full[j] * k1[j] + 2.0 * half[j] * (k2[j] + k3[j]) + k4[j]);
    }
    const double norm = spectrum_l2(uh, grid);
    if (!std::isfinite(norm) || (initial > 0.0 && norm > 1e6 * initial))
      throw NumericError("blow-up detected at step " + std::to_string(s) + " (t=" + std::to_string(s * dt) +
                         "), L2 norm " + std::to_string(norm) + " vs initial " + std::to_string(initial));
    if (s % static_cast<std::size_t>(cfg.record_every) == 0) snapshots.push_back(from_spectrum(grid, uh));
  }
  return SpaceTimeTrace(0.0, dt * cfg.record_every, std::move(snapshots));
}

double suggested_dt(const NonlinearitySpec& spec, const ComplexField& u0) {
  const double kmax = u0.grid.max_wavenumber();
  const double amp = max_abs(u0);
  const auto m = static_cast<double>(spec.min_degree());
  const double denom = std::pow(kmax, spec.gamma()) * m * std::pow(amp, m - 1.0);
  return denom > 0.0 ? 0.5 / denom : std::numeric_limits<double>::infinity();
}

double sup_time_l2_distance(const SpaceTimeTrace& a, const SpaceTimeTrace& b) {
  if (a.size() != b.size()) throw ConfigError("traces have different lengths");
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, l2_norm(a[j] - b[j]));
  return d;
}

PicardReport picard_sequence(const ComplexField& u0, const SolveConfig& cfg, int kmax) {
  cfg.validate();
  if (kmax < 2) throw ConfigError("Picard iteration needs kmax >= 2");
  const auto& grid = u0.grid;
  const std::size_t n = grid.n();
  const std::size_t count = cfg.steps() / static_cast<std::size_t>(cfg.record_every) + 1;
  const double h = cfg.dt * cfg.record_every;

  auto u0h = to_spectrum(u0);
  u0h[n / 2] = 0.0;
  std::vector<std::vector<cplx>> forward_phase(count), backward_phase(count);
  for (std::size_t j = 0; j < count; ++j) {
    forward_phase[j] = phase_table(grid, cfg.sym, h * static_cast<double>(j));
    backward_phase[j] = phase_table(grid, cfg.sym, -h * static_cast<double>(j));
  }
  std::vector<std::vector<double>> weights(count);
  for (std::size_t j = 0; j < count; ++j) weights[j] = integration_weights(count, static_cast<double>(j));

  auto free_trace = [&] {
    std::vector<ComplexField> snaps;
    std::vector<cplx> s(n);
    for (std::size_t j = 0; j < count; ++j) {
      for (std::size_t k = 0; k < n; ++k) s[k] = forward_phase[j][k] * u0h[k];
      snaps.push_back(from_spectrum(grid, s));
    }
    return SpaceTimeTrace(0.0, h, std::move(snaps));
  };

  PicardReport report;
  report.iterates.push_back(free_trace());
  std::vector<std::vector<cplx>> interaction(count, std::vector<cplx>(n));
  std::vector<cplx> acc(n);
  int rising = 0;
  for (int it = 1; it <= kmax; ++it) {
    const auto& prev = report.iterates.back();
    for (std::size_t j = 0; j < count; ++j) {
      const auto g = evaluate_nonlinearity(cfg.spec, prev[j]);
      fft::forward(g.values, interaction[j]);
      for (std::size_t k = 0; k < n; ++k) interaction[j][k] *= backward_phase[j][k];
    }
    std::vector<ComplexField> snaps;
    snaps.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
      std::fill(acc.begin(), acc.end(), cplx{});
      for (std::size_t l = 0; l < count; ++l) {
        const double w = weights[j][l];
        if (w == 0.0) continue;
        for (std::size_t k = 0; k < n; ++k) acc[k] += w * interaction[l][k];
      }
      for (std::size_t k = 0; k < n; ++k) acc[k] = forward_phase[j][k] * (u0h[k] + cplx{0.0, -h} * acc[k]);
      snaps.push_back(from_spectrum(grid, acc));
    }
    report.iterates.emplace_back(0.0, h, std::move(snaps));
    const auto& last = report.iterates.back();
    report.diff_norms.push_back(sup_time_l2_distance(last, report.iterates[report.iterates.size() - 2]));
    if (report.diff_norms.size() >= 2) {
      const double prev_d = report.diff_norms[report.diff_norms.size() - 2];
      const double r = prev_d > 0.0 ? report.diff_norms.back() / prev_d : 0.0;
      report.ratios.push_back(r);
      rising = r > 1.0 ? rising + 1 : 0;
      if (rising >= 2) {
        report.diverged = true;
        break;
      }
    }
  }
  return report;
}

Invariants invariants(const ComplexField& u) {
  const auto ux = derivative(u, 1);
  const auto uxx = derivative(u, 2);
  const double dx = u.grid.dx();
  double p0 = 0.0, p1 = 0.0;
  cplx p2{};
  for (std::size_t j = 0; j < u.size(); ++j) {
    const cplx v = u.values[j], vx = ux.values[j], vxx = uxx.values[j];
    const double a = std::norm(v);
    p0 += 0.5 * a;
    p1 += 0.5 * std::norm(vx) - 0.125 * a * a;
    p2 += 0.5 * std::norm(vxx) + 0.75 * a * std::conj(v) * vxx + 0.125 * a * v * std::conj(vxx) +
          0.625 * vx * vx * std::conj(v) * std::conj(v) + 0.75 * std::norm(vx) * a + a * a * a / 16.0;
  }
  return {p0 * dx, p1 * dx, p2 * dx};
}

double pde_residual(const SpaceTimeTrace& trace, const SolveConfig& cfg) {
  if (trace.size() < 5) throw ConfigError("residual needs at least five snapshots");
  const auto& grid = trace.grid();
  const double h = trace.dt();
  double worst = 0.0;
  for (std::size_t j = 2; j + 2 < trace.size(); ++j) {
    ComplexField r(grid);
    const auto lin = apply_multiplier(trace[j], [&](double xi) { return cplx{cfg.sym.rate(xi), 0.0}; });
    const auto g = evaluate_nonlinearity(cfg.spec, trace[j]);
    for (std::size_t k = 0; k < grid.n(); ++k) {
      const cplx ut = (-trace[j + 2].values[k] + 8.0 * trace[j + 1].values[k] - 8.0 * trace[j - 1].values[k] +
                       trace[j - 2].values[k]) /
                      (12.0 * h);
      r.values[k] = cplx{0.0, 1.0} * ut + lin.values[k] - g.values[k];
    }
    worst = std::max(worst, l2_norm(r));
  }
  return worst;
}

}  // namespace fnls
