#include "fnls/field.hpp"

#include <algorithm>
#include <cmath>

#include "fnls/error.hpp"
#include "fnls/fft.hpp"

namespace fnls {

ComplexField::ComplexField(const SpectralGrid& g) : grid(g), values(g.n(), cplx{}) {}

ComplexField::ComplexField(const SpectralGrid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.n()) throw ConfigError("field length does not match grid size");
}

std::vector<cplx> to_spectrum(const ComplexField& f) {
  std::vector<cplx> out(f.size());
  fft::forward(f.values, out);
  return out;
}

ComplexField from_spectrum(const SpectralGrid& grid, std::span<const cplx> spectrum) {
  if (spectrum.size() != grid.n()) throw ConfigError("spectrum length does not match grid size");
  ComplexField out(grid);
  fft::inverse(spectrum, out.values);
  return out;
}

ComplexField conjugate(const ComplexField& f) {
  ComplexField out(f.grid);
  std::transform(f.values.begin(), f.values.end(), out.values.begin(), [](cplx v) { return std::conj(v); });
  return out;
}

namespace {
void require_same_grid(const ComplexField& a, const ComplexField& b) {
  if (!(a.grid == b.grid)) throw ConfigError("fields live on different grids");
}
}  // namespace

ComplexField operator+(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a, b);
  ComplexField out(a.grid);
  for (std::size_t j = 0; j < a.size(); ++j) out.values[j] = a.values[j] + b.values[j];
  return out;
}

ComplexField operator-(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a, b);
  ComplexField out(a.grid);
  for (std::size_t j = 0; j < a.size(); ++j) out.values[j] = a.values[j] - b.values[j];
  return out;
}

ComplexField operator*(cplx c, const ComplexField& f) {
  ComplexField out(f.grid);
  for (std::size_t j = 0; j < f.size(); ++j) out.values[j] = c * f.values[j];
  return out;
}

double l2_norm(const ComplexField& f) {
  double acc = 0.0;
  for (const auto& v : f.values) acc += std::norm(v);
  return std::sqrt(acc * f.grid.dx());
}

double spectral_l2_norm(const ComplexField& f) {
  const auto spec = to_spectrum(f);
  double acc = 0.0;
  for (const auto& v : spec) acc += std::norm(v);
  return std::sqrt(acc * f.grid.dx() / static_cast<double>(f.size()));
}

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (const auto& v : f.values) m = std::max(m, std::abs(v));
  return m;
}

double relative_l2(const ComplexField& a, const ComplexField& b, const ComplexField& ref) {
  const double denom = l2_norm(ref);
  const double num = l2_norm(a - b);
  return denom > 0.0 ? num / denom : num;
}

double boundary_ratio(const ComplexField& f, std::size_t edge_points) {
  const double peak = max_abs(f);
  if (peak == 0.0) return 0.0;
  const std::size_t n = f.size();
  edge_points = std::min(edge_points, n / 2);
  double edge = 0.0;
  for (std::size_t j = 0; j < edge_points; ++j)
    edge = std::max({edge, std::abs(f.values[j]), std::abs(f.values[n - 1 - j])});
  return edge / peak;
}

}  // namespace fnls
