#include "fnls/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fnls/error.hpp"
#include "fnls/fft.hpp"

namespace fnls {
namespace {

constexpr double kSupportTol = 1e-15;

struct Support {
  std::vector<std::size_t> index;
  std::vector<cplx> value;
};

Support support_of(const std::vector<cplx>& spec, const SpectralGrid& grid) {
  double peak = 0.0;
  for (const auto& v : spec) peak = std::max(peak, std::abs(v));
  Support s;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    if (grid.is_nyquist(j) || std::abs(spec[j]) <= kSupportTol * peak || spec[j] == cplx{}) continue;
    s.index.push_back(j);
    s.value.push_back(spec[j]);
  }
  return s;
}

double mask_argument(double xi1, double xi2, PairSign sign) { return sign == PairSign::minus ? xi1 - xi2 : xi1 + xi2; }

}  // namespace

ComplexField rl_bilinear(const ComplexField& f, const ComplexField& g, double L, PairSign sign,
                         const BumpProfile& bump) {
  if (!(f.grid == g.grid)) throw ConfigError("bilinear operands live on different grids");
  if (!is_dyadic(L)) throw ConfigError("L must be dyadic");
  const auto& grid = f.grid;
  if (!(2.0 * L < 2.0 * grid.max_wavenumber())) throw ResolutionError("L exceeds the resolvable frequency range");
  const auto fs = support_of(to_spectrum(f), grid);
  const auto gs = support_of(to_spectrum(g), grid);
  const long n = static_cast<long>(grid.n());
  const long half = n / 2;
  double peak = 0.0;
  for (const auto& a : fs.value)
    for (const auto& b : gs.value) peak = std::max(peak, std::abs(a * b));
  std::vector<cplx> out(grid.n(), cplx{});
  for (std::size_t a = 0; a < fs.index.size(); ++a) {
    const long i1 = grid.signed_index(fs.index[a]);
    const double xi1 = grid.wavenumber(fs.index[a]);
    for (std::size_t b = 0; b < gs.index.size(); ++b) {
      const double w = bump.psi(L, std::abs(mask_argument(xi1, grid.wavenumber(gs.index[b]), sign)));
      if (w == 0.0) continue;
      const cplx term = w * fs.value[a] * gs.value[b];
      const long k = i1 + grid.signed_index(gs.index[b]);
      if (k <= -half || k >= half) {
        if (std::abs(term) > 1e-12 * peak)
          throw ResolutionError("bilinear output frequency outside the grid band; refine the grid");
        continue;
      }
      out[static_cast<std::size_t>(k >= 0 ? k : k + n)] += term;
    }
  }
  for (auto& v : out) v /= static_cast<double>(n);
  return from_spectrum(grid, out);
}

ComplexField exact_product(const ComplexField& f, const ComplexField& g) {
  if (!(f.grid == g.grid)) throw ConfigError("operands live on different grids");
  // Two-fold zero padding makes a degree-2 product alias-free.
  const auto& grid = f.grid;
  const std::size_t n = grid.n();
  const std::size_t np = 2 * n;
  auto pad = [&](const ComplexField& h) {
    const auto s = to_spectrum(h);
    std::vector<cplx> buf(np, cplx{});
    for (std::size_t j = 0; j < n; ++j) {
      if (grid.is_nyquist(j)) continue;
      const long idx = grid.signed_index(j);
      buf[idx >= 0 ? static_cast<std::size_t>(idx) : np - static_cast<std::size_t>(-idx)] = 2.0 * s[j];
    }
    fft::inverse_inplace(buf);
    return buf;
  };
  auto a = pad(f);
  const auto b = pad(g);
  for (std::size_t j = 0; j < np; ++j) a[j] *= b[j];
  fft::forward_inplace(a);
  std::vector<cplx> out(n, cplx{});
  for (std::size_t j = 0; j < n; ++j) {
    if (grid.is_nyquist(j)) continue;
    const long idx = grid.signed_index(j);
    out[j] = a[idx >= 0 ? static_cast<std::size_t>(idx) : np - static_cast<std::size_t>(-idx)] / 2.0;
  }
  return from_spectrum(grid, out);
}

PairSweep::PairSweep(const SpectralGrid& grid, const std::vector<cplx>& first, const std::vector<cplx>& second,
                     double L, PairSign sign, const LinearSymbol& sym, double rate2_sign, const BumpProfile& bump)
    : grid_(grid) {
  if (!is_dyadic(L)) throw ConfigError("L must be dyadic");
  const auto fs = support_of(first, grid);
  const auto gs = support_of(second, grid);
  const long n = static_cast<long>(grid.n());
  const long half = n / 2;
  std::map<long, std::size_t> slots;
  double rmin = 0.0, rmax = 0.0;
  bool first_pair = true;
  for (std::size_t a = 0; a < fs.index.size(); ++a) {
    const double xi1 = grid.wavenumber(fs.index[a]);
    for (std::size_t b = 0; b < gs.index.size(); ++b) {
      const double xi2 = grid.wavenumber(gs.index[b]);
      const double w = bump.psi(L, std::abs(mask_argument(xi1, xi2, sign)));
      if (w == 0.0) continue;
      const long k = grid.signed_index(fs.index[a]) + grid.signed_index(gs.index[b]);
      if (k <= -half || k >= half) throw ResolutionError("bilinear sweep output outside the grid band");
      const auto [it, inserted] = slots.emplace(k, slots.size());
      amp_.push_back(w * fs.value[a] * gs.value[b] / static_cast<double>(n));
      const double r = sym.rate(xi1) + rate2_sign * sym.rate(xi2);
      rate_.push_back(r);
      slot_.push_back(it->second);
      rmin = first_pair ? r : std::min(rmin, r);
      rmax = first_pair ? r : std::max(rmax, r);
      first_pair = false;
    }
  }
  slot_count_ = slots.size();
  rate_spread_ = rmax - rmin;
}

std::vector<double> PairSweep::squared_norms(double t0, double dt, std::size_t count) const {
  const std::size_t p = amp_.size();
  std::vector<cplx> phase(p), step(p);
  for (std::size_t i = 0; i < p; ++i) {
    phase[i] = amp_[i] * std::polar(1.0, rate_[i] * t0);
    step[i] = std::polar(1.0, rate_[i] * dt);
  }
  const double scale = grid_.dx() / static_cast<double>(grid_.n());
  std::vector<double> out(count);
  std::vector<cplx> acc(slot_count_);
  for (std::size_t j = 0; j < count; ++j) {
    // Re-anchor periodically so the incremental rotation does not accumulate error.
    if (j > 0 && j % 64 == 0)
      for (std::size_t i = 0; i < p; ++i) phase[i] = amp_[i] * std::polar(1.0, rate_[i] * (t0 + dt * static_cast<double>(j)));
    std::fill(acc.begin(), acc.end(), cplx{});
    for (std::size_t i = 0; i < p; ++i) acc[slot_[i]] += phase[i];
    double s = 0.0;
    for (const auto& v : acc) s += std::norm(v);
    out[j] = s * scale;
    for (std::size_t i = 0; i < p; ++i) phase[i] *= step[i];
  }
  return out;
}

}  // namespace fnls
