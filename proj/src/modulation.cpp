#include "fnls/modulation.hpp"

#include <algorithm>
#include <cmath>

#include "fnls/error.hpp"
#include "fnls/fft.hpp"

namespace fnls {
namespace {

double next_dyadic_at_least(double v) { return std::exp2(std::ceil(std::log2(v) - 1e-12)); }

}  // namespace

ModulationAnalysis::ModulationAnalysis(const SpaceTimeTrace& trace, const LinearSymbol& sym, const BumpProfile& bump,
                                       double window_fraction)
    : grid_(trace.grid()),
      sym_(sym),
      bump_(bump),
      t0_(trace.t0()),
      dt_(trace.dt()),
      count_(trace.size()) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) throw ConfigError("window fraction must lie in (0, 1]");
  if (count_ < 8) throw ConfigError("modulation analysis needs at least 8 snapshots");
  const double span = trace.t_end() - t0_;
  win_lo_ = t0_ + 0.5 * (1.0 - window_fraction) * span;
  win_hi_ = t0_ + 0.5 * (1.0 + window_fraction) * span;
  tau_spacing_ = 2.0 * kPi / (static_cast<double>(count_) * dt_);
  low_scale_ = next_dyadic_at_least(tau_spacing_);
  top_scale_ = next_dyadic_at_least(tau_max());
  if (2.0 * low_scale_ > top_scale_) throw ResolutionError("trace too short to resolve any modulation block");

  const std::size_t n = grid_.n();
  spectrum_.assign(count_ * n, cplx{});
  std::vector<cplx> row(n);
  for (std::size_t m = 0; m < count_; ++m) {
    const double w = window(trace.time(m));
    for (std::size_t k = 0; k < n; ++k) row[k] = w * trace[m].values[k];
    fft::forward_inplace(row);
    std::copy(row.begin(), row.end(), spectrum_.begin() + static_cast<long>(m * n));
  }
  std::vector<cplx> col(count_);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < count_; ++m) col[m] = spectrum_[m * n + k];
    fft::forward_inplace(col);
    for (std::size_t m = 0; m < count_; ++m) spectrum_[m * n + k] = col[m];
  }
}

double ModulationAnalysis::tau_max() const { return kPi / dt_; }

bool ModulationAnalysis::resolvable(double A) const {
  return A >= tau_spacing_ * (1.0 - 1e-12) && 0.5 * A <= tau_max() * (1.0 + 1e-12);
}

std::vector<double> ModulationAnalysis::blocks() const {
  std::vector<double> out;
  for (double A = 2.0 * low_scale_; A <= top_scale_ * (1.0 + 1e-12); A *= 2.0) out.push_back(A);
  return out;
}

double ModulationAnalysis::window(double t) const {
  if (t <= win_lo_ || t >= win_hi_) return 0.0;
  return 0.5 * (1.0 - std::cos(2.0 * kPi * (t - win_lo_) / (win_hi_ - win_lo_)));
}

double ModulationAnalysis::modulation(std::size_t m, std::size_t k) const {
  const long J = static_cast<long>(count_);
  long sm = static_cast<long>(m);
  if (sm >= (J + 1) / 2) sm -= J;
  const double tau = tau_spacing_ * static_cast<double>(sm);
  const double period = 2.0 * tau_max();
  double d = tau - sym_.rate(grid_.wavenumber(k));
  d -= period * std::floor((d + tau_max()) / period);
  return d;
}

std::vector<double> ModulationAnalysis::mask_for(double A) const {
  if (!is_dyadic(A)) throw ConfigError("modulation scale must be dyadic");
  if (!resolvable(A))
    throw ResolutionError("modulation scale A=" + std::to_string(A) + " unresolvable (spacing " +
                          std::to_string(tau_spacing_) + ", max " + std::to_string(tau_max()) + ")");
  const std::size_t n = grid_.n();
  std::vector<double> mask(count_ * n, 0.0);
  for (std::size_t m = 0; m < count_; ++m)
    for (std::size_t k = 0; k < n; ++k)
      if (!grid_.is_nyquist(k)) mask[m * n + k] = bump_.psi(A, std::abs(modulation(m, k)));
  return mask;
}

std::vector<double> ModulationAnalysis::low_mask() const {
  const std::size_t n = grid_.n();
  std::vector<double> mask(count_ * n, 0.0);
  for (std::size_t m = 0; m < count_; ++m)
    for (std::size_t k = 0; k < n; ++k)
      if (!grid_.is_nyquist(k)) mask[m * n + k] = bump_.phi(std::abs(modulation(m, k)) / low_scale_);
  return mask;
}

SpaceTimeTrace ModulationAnalysis::synthesize(const std::vector<double>& mask) const {
  const std::size_t n = grid_.n();
  std::vector<cplx> work(spectrum_.size());
  for (std::size_t i = 0; i < work.size(); ++i) work[i] = mask[i] * spectrum_[i];
  std::vector<cplx> col(count_);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < count_; ++m) col[m] = work[m * n + k];
    fft::inverse_inplace(col);
    for (std::size_t m = 0; m < count_; ++m) work[m * n + k] = col[m];
  }
  std::vector<ComplexField> fields;
  fields.reserve(count_);
  for (std::size_t m = 0; m < count_; ++m) {
    ComplexField f(grid_);
    fft::inverse(std::span<const cplx>(work.data() + m * n, n), f.values);
    fields.push_back(std::move(f));
  }
  return SpaceTimeTrace(t0_, dt_, std::move(fields));
}

SpaceTimeTrace ModulationAnalysis::windowed() const {
  return synthesize(std::vector<double>(spectrum_.size(), 1.0));
}

SpaceTimeTrace ModulationAnalysis::project(double A) const { return synthesize(mask_for(A)); }

SpaceTimeTrace ModulationAnalysis::project_low() const { return synthesize(low_mask()); }

double ModulationAnalysis::mass_with(const std::vector<double>& mask) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < spectrum_.size(); ++i) acc += mask[i] * mask[i] * std::norm(spectrum_[i]);
  return acc * dt_ * grid_.dx() / static_cast<double>(count_ * grid_.n());
}

double ModulationAnalysis::block_mass(double A) const { return mass_with(mask_for(A)); }
double ModulationAnalysis::low_mass() const { return mass_with(low_mask()); }
double ModulationAnalysis::total_mass() const { return mass_with(std::vector<double>(spectrum_.size(), 1.0)); }

double ModulationAnalysis::xbq_norm(double b, double q) const {
  if (!(q >= 1.0)) throw ConfigError("Besov exponent q must be >= 1");
  std::vector<double> terms{std::pow(low_scale_, b) * std::sqrt(low_mass())};
  for (double A : blocks()) terms.push_back(std::pow(A, b) * std::sqrt(block_mass(A)));
  if (std::isinf(q)) return *std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += std::pow(t, q);
  return std::pow(acc, 1.0 / q);
}

double ModulationAnalysis::window_floor(double tol) const {
  // Oversampled window spectrum so off-lattice frequency shifts are represented.
  constexpr std::size_t kOversample = 8;
  const std::size_t len = count_ * kOversample;
  std::vector<cplx> w(len, cplx{});
  for (std::size_t m = 0; m < count_; ++m) w[m] = window(t0_ + static_cast<double>(m) * dt_);
  fft::forward_inplace(w);
  const double spacing = tau_spacing_ / static_cast<double>(kOversample);
  double total = 0.0;
  for (const auto& v : w) total += std::norm(v);
  for (double A = low_scale_; A <= top_scale_ * (1.0 + 1e-12); A *= 2.0) {
    double tail = 0.0;
    for (std::size_t m = 0; m < len; ++m) {
      long sm = static_cast<long>(m);
      if (sm >= static_cast<long>((len + 1) / 2)) sm -= static_cast<long>(len);
      if (std::abs(spacing * static_cast<double>(sm)) >= 0.5 * A) tail += std::norm(w[m]);
    }
    if (tail < tol * total) return A;
  }
  return 2.0 * top_scale_;
}

}  // namespace fnls
