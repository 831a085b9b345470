#include "fnls/estimates.hpp"

#include <algorithm>
#include <cmath>

#include "fnls/error.hpp"
#include "fnls/fft.hpp"
#include "fnls/spectral.hpp"

namespace fnls {

std::string to_string(EstimateKind k) {
  switch (k) {
    case EstimateKind::strichartz: return "strichartz";
    case EstimateKind::kato: return "kato";
    case EstimateKind::kenig_ruiz: return "kenig_ruiz";
    case EstimateKind::maximal: return "maximal";
    case EstimateKind::bilinear: return "bilinear";
    case EstimateKind::refined_bilinear: return "refined_bilinear";
  }
  return "unknown";
}

EstimateKind estimate_kind_from_string(const std::string& s) {
  for (auto k : {EstimateKind::strichartz, EstimateKind::kato, EstimateKind::kenig_ruiz, EstimateKind::maximal,
                 EstimateKind::bilinear, EstimateKind::refined_bilinear})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown estimate kind: " + s);
}

double support_radius(const ComplexField& f, double tol) {
  const double peak = max_abs(f);
  double r = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    if (std::abs(f.values[j]) > tol * peak) r = std::max(r, std::abs(f.grid.x(j)));
  return r;
}

namespace {

const LinearSymbol kQuartic{1.0, 0.0};

// Amplitude (relative to peak) beyond which data may wrap around the periodic domain.
constexpr double kWrapTolerance = 1e-6;

double group_velocity(double xi) { return 4.0 * xi * xi * xi; }

struct SpectralExtent {
  double min_velocity = kInf;
  double max_velocity = -kInf;
  double max_speed = 0.0;
  double min_xi = kInf;
  double max_xi = -kInf;
  double max_rate = 0.0;

  double diameter() const { return max_xi - min_xi; }
};

SpectralExtent extent_of(const std::vector<cplx>& spec, const SpectralGrid& grid) {
  double peak = 0.0;
  for (const auto& v : spec) peak = std::max(peak, std::abs(v));
  SpectralExtent e;
  bool any = false;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    if (grid.is_nyquist(j) || !(std::abs(spec[j]) > 1e-15 * peak)) continue;
    const double xi = grid.wavenumber(j);
    const double v = group_velocity(xi);
    e.min_velocity = std::min(e.min_velocity, v);
    e.max_velocity = std::max(e.max_velocity, v);
    e.max_speed = std::max(e.max_speed, std::abs(v));
    e.min_xi = std::min(e.min_xi, xi);
    e.max_xi = std::max(e.max_xi, xi);
    e.max_rate = std::max(e.max_rate, std::abs(kQuartic.rate(xi)));
    any = true;
  }
  if (!any) throw ConfigError("estimate data is identically zero");
  return e;
}

// Largest velocity difference between any two pieces of the pair, within or across packets.
double relative_velocity(const SpectralExtent& a, const SpectralExtent& b) {
  return std::max({a.max_velocity - b.min_velocity, b.max_velocity - a.min_velocity, a.max_velocity - a.min_velocity,
                   b.max_velocity - b.min_velocity});
}

std::size_t sample_count(double length, double rate, double factor) {
  return static_cast<std::size_t>(std::ceil(length * rate / kPi * factor)) + 1;
}

struct LinearSetup {
  MultiplierSymbol weight;
  Outer outer;
  double q;
  double r;
};

LinearSetup linear_setup(EstimateKind kind, const EstimateParams& p) {
  switch (kind) {
    case EstimateKind::strichartz:
      if (!(p.q >= 1.0) || !(p.r >= 1.0)) throw ConfigError("Strichartz exponents must be >= 1");
      return {symbol::FracHomog{2.0 / p.q}, Outer::time, p.q, p.r};
    case EstimateKind::kato: return {symbol::FracHomog{1.5}, Outer::space, kInf, 2.0};
    case EstimateKind::kenig_ruiz: return {symbol::FracHomog{-0.25}, Outer::space, 4.0, kInf};
    case EstimateKind::maximal:
      if (!(p.eps > 0.0)) throw ConfigError("maximal-function epsilon must be positive");
      return {symbol::FracInhomog{-(1.0 + p.eps)}, Outer::space, 2.0, kInf};
    default: throw ConfigError("not a linear estimate kind");
  }
}

double linear_lhs(const std::vector<cplx>& weighted, const SpectralGrid& grid, const LinearSetup& s, double t_begin,
                  double t_end, std::size_t samples) {
  MixedNormAccumulator acc(s.outer, s.q, s.r, grid.n(), grid.dx());
  const double h = (t_end - t_begin) / static_cast<double>(samples - 1);
  const auto w = trapezoid_weights(samples, h);
  std::vector<cplx> buf(grid.n());
  for (std::size_t j = 0; j < samples; ++j) {
    std::copy(weighted.begin(), weighted.end(), buf.begin());
    free_evolve_spectrum(buf, grid, t_begin + h * static_cast<double>(j), kQuartic);
    fft::inverse_inplace(buf);
    acc.add(buf, w[j]);
  }
  return acc.result();
}

EstimateResult linear_ratio(EstimateKind kind, const EstimateParams& p, const ComplexField& phi) {
  const auto setup = linear_setup(kind, p);
  make_shell(p.N, phi.grid);
  const auto data = lp_project(phi, projection::Shell{p.N});
  const auto weighted_field = fourier_multiplier(data, setup.weight);
  const auto weighted = to_spectrum(weighted_field);
  const auto& grid = phi.grid;
  const auto ext = extent_of(weighted, grid);
  const double radius = std::max(support_radius(data, kWrapTolerance), support_radius(weighted_field, kWrapTolerance));
  const double margin = p.window_margin > 0.0 ? p.window_margin : 0.8;
  const double room = 0.5 * grid.period() - radius;
  if (!(room > 0.0)) throw ResolutionError("estimate data fills the periodic domain");
  const double tau = margin * room / ext.max_speed;
  double t_begin = -tau, t_end = tau;
  if (kind == EstimateKind::maximal) {
    t_begin = 0.0;
    t_end = std::min(p.T, tau);
  }
  const double factor = p.sample_factor > 0.0 ? p.sample_factor : 2.0;
  EstimateResult out;
  out.samples = std::max<std::size_t>(sample_count(t_end - t_begin, ext.max_rate, factor), 5);
  out.t_begin = t_begin;
  out.t_end = t_end;
  out.lhs = linear_lhs(weighted, grid, setup, t_begin, t_end, out.samples);
  out.rhs = l2_norm(data);
  out.ratio = out.lhs / out.rhs;
  out.boundary_ratio = boundary_ratio(data);
  if (p.check_refinement) {
    const double fine = linear_lhs(weighted, grid, setup, t_begin, t_end, 2 * out.samples - 1);
    out.refinement_delta = std::abs(fine - out.lhs) / out.lhs;
  }
  return out;
}

void require_separation(const EstimateParams& p, double min_factor) {
  if (p.enforce_separation && p.N1 < min_factor * p.N2)
    throw ConfigError("bilinear estimate needs N1 >= " + std::to_string(min_factor) + " N2");
}

double product_lhs(const std::vector<cplx>& a, const std::vector<cplx>& b, const SpectralGrid& grid, double tau,
                   std::size_t samples) {
  const double h = 2.0 * tau / static_cast<double>(samples - 1);
  const auto w = trapezoid_weights(samples, h);
  std::vector<cplx> ua(grid.n()), ub(grid.n());
  double total = 0.0;
  for (std::size_t j = 0; j < samples; ++j) {
    const double t = -tau + h * static_cast<double>(j);
    std::copy(a.begin(), a.end(), ua.begin());
    std::copy(b.begin(), b.end(), ub.begin());
    free_evolve_spectrum(ua, grid, t, kQuartic);
    free_evolve_spectrum(ub, grid, t, kQuartic);
    fft::inverse_inplace(ua);
    fft::inverse_inplace(ub);
    double s = 0.0;
    for (std::size_t k = 0; k < grid.n(); ++k) s += std::norm(ua[k] * ub[k]);
    total += w[j] * s * grid.dx();
  }
  return std::sqrt(total);
}

EstimateResult bilinear_ratio(const EstimateParams& p, const ComplexField& f, const ComplexField& g) {
  require_separation(p, 4.0);
  const auto& grid = f.grid;
  if (!(f.grid == g.grid)) throw ConfigError("bilinear data live on different grids");
  make_shell(p.N1, grid);
  make_shell(p.N2, grid);
  if (!(2.0 * p.N1 + 2.0 * p.N2 < grid.max_wavenumber()))
    throw ResolutionError("grid does not resolve the product bandwidth 2(N1 + N2)");
  const auto u1 = lp_project(f, projection::Shell{p.N1});
  const auto u2 = lp_project(g, projection::Shell{p.N2});
  const auto s1 = to_spectrum(u1);
  const auto s2 = to_spectrum(u2);
  const auto e1 = extent_of(s1, grid);
  const auto e2 = extent_of(s2, grid);
  // Over [-tau, tau] the packets meet at most once and neither overlaps its own periodic copy.
  const double room =
      grid.period() - 2.0 * std::max(support_radius(u1, kWrapTolerance), support_radius(u2, kWrapTolerance));
  if (!(room > 0.0)) throw ResolutionError("bilinear data fill the periodic domain");
  const double margin = p.window_margin > 0.0 ? p.window_margin : 0.9;
  const double relative = relative_velocity(e1, e2);
  const double tau = 0.5 * margin * room / relative;
  // |u1 u2|^2 beats at xi1^4 + xi2^4 - xi1'^4 - xi2'^4 with xi1 - xi1' = xi2' - xi2.
  const double variation = std::min(e1.diameter(), e2.diameter()) * relative;
  const double factor = p.sample_factor > 0.0 ? p.sample_factor : 1.0;
  EstimateResult out;
  out.samples = std::max<std::size_t>(sample_count(2.0 * tau, variation, factor), 9);
  out.t_begin = -tau;
  out.t_end = tau;
  out.lhs = product_lhs(s1, s2, grid, tau, out.samples);
  out.rhs = std::pow(p.N1, -1.5) * l2_norm(u1) * l2_norm(u2);
  out.ratio = out.lhs / out.rhs;
  out.boundary_ratio = std::max(boundary_ratio(u1), boundary_ratio(u2));
  if (p.check_refinement) {
    const double fine = product_lhs(s1, s2, grid, tau, 2 * out.samples - 1);
    out.refinement_delta = std::abs(fine - out.lhs) / out.lhs;
  }
  return out;
}

double sweep_lhs(const PairSweep& sweep, double tau, std::size_t samples) {
  const double h = 2.0 * tau / static_cast<double>(samples - 1);
  const auto vals = sweep.squared_norms(-tau, h, samples);
  const auto w = trapezoid_weights(samples, h);
  double total = 0.0;
  for (std::size_t j = 0; j < samples; ++j) total += w[j] * vals[j];
  return std::sqrt(total);
}

EstimateResult refined_ratio(const EstimateParams& p, const ComplexField& f, const ComplexField& g) {
  if (p.enforce_separation && p.N1 < p.N2) throw ConfigError("refined estimate needs N1 >= N2");
  if (!is_dyadic(p.L)) throw ConfigError("L must be dyadic");
  const auto& grid = f.grid;
  if (!(f.grid == g.grid)) throw ConfigError("bilinear data live on different grids");
  make_shell(p.N1, grid);
  make_shell(p.N2, grid);
  const auto u1 = lp_project(f, projection::Shell{p.N1});
  const auto u2 = lp_project(g, projection::Shell{p.N2});
  const auto s1 = to_spectrum(u1);
  auto s2 = to_spectrum(u2);
  const auto e1 = extent_of(s1, grid);
  const auto e2 = extent_of(s2, grid);
  double rate2_sign = 1.0;
  if (p.sign == PairSign::plus) {
    // Second argument is conj(e^{it d^4} g): spectrum conj(g^(-eta)) evolving with -rate.
    const std::size_t n = grid.n();
    std::vector<cplx> mirrored(n);
    for (std::size_t j = 0; j < n; ++j) mirrored[j] = std::conj(s2[(n - j) % n]);
    s2 = std::move(mirrored);
    rate2_sign = -1.0;
  }
  const PairSweep sweep(grid, s1, s2, p.L, p.sign, kQuartic, rate2_sign);
  if (sweep.pair_count() == 0) throw ConfigError("no frequency pairs survive the psi_L mask");
  const double relative = relative_velocity(e1, e2);
  const double room =
      grid.period() - 2.0 * std::max(support_radius(u1, kWrapTolerance), support_radius(u2, kWrapTolerance));
  if (!(room > 0.0)) throw ResolutionError("bilinear data fill the periodic domain");
  const double margin = p.window_margin > 0.0 ? p.window_margin : 0.9;
  const double tau = 0.5 * margin * room / relative;
  const double factor = p.sample_factor > 0.0 ? p.sample_factor : 1.0;
  EstimateResult out;
  out.samples = std::max<std::size_t>(sample_count(2.0 * tau, sweep.max_phase_rate_spread(), factor), 9);
  out.t_begin = -tau;
  out.t_end = tau;
  out.lhs = sweep_lhs(sweep, tau, out.samples);
  out.rhs = std::pow(p.N1, -1.0) * std::pow(p.L, -0.5) * l2_norm(u1) * l2_norm(u2);
  out.ratio = out.lhs / out.rhs;
  out.boundary_ratio = std::max(boundary_ratio(u1), boundary_ratio(u2));
  if (p.check_refinement) {
    const double fine = sweep_lhs(sweep, tau, 2 * out.samples - 1);
    out.refinement_delta = std::abs(fine - out.lhs) / out.lhs;
  }
  return out;
}

}  // namespace

EstimateResult estimate_ratio(EstimateKind kind, const EstimateParams& params, const ComplexField& first,
                              const std::optional<ComplexField>& second) {
  switch (kind) {
    case EstimateKind::bilinear:
      if (!second) throw ConfigError("bilinear estimate needs two fields");
      return bilinear_ratio(params, first, *second);
    case EstimateKind::refined_bilinear:
      if (!second) throw ConfigError("refined estimate needs two fields");
      return refined_ratio(params, first, *second);
    default: return linear_ratio(kind, params, first);
  }
}

}  // namespace fnls
