#include "fnls/grid.hpp"

#include <cmath>
#include <string>

#include "fnls/error.hpp"

namespace fnls {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

bool is_dyadic(double N) {
  if (!(N > 0.0) || !std::isfinite(N)) return false;
  int e = 0;
  return std::frexp(N, &e) == 0.5;
}

SpectralGrid::SpectralGrid(std::size_t n, double period) : n_(n), period_(period) {
  if (!is_power_of_two(n) || n < 16)
    throw ConfigError("grid point count must be a power of two >= 16, got " + std::to_string(n));
  if (!(period > 0.0) || !std::isfinite(period))
    throw ConfigError("grid period must be positive and finite");
}

long SpectralGrid::signed_index(std::size_t j) const {
  const auto half = n_ / 2;
  return j < half ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n_);
}

std::vector<double> SpectralGrid::wavenumbers() const {
  std::vector<double> k(n_);
  for (std::size_t j = 0; j < n_; ++j) k[j] = wavenumber(j);
  return k;
}

std::vector<double> SpectralGrid::lattice() const {
  std::vector<double> k(n_);
  const long half = static_cast<long>(n_ / 2);
  for (long j = -half; j < half; ++j) k[static_cast<std::size_t>(j + half)] = dk() * static_cast<double>(j);
  return k;
}

std::vector<double> SpectralGrid::points() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

SpectralGrid make_grid(std::size_t n, double period) { return SpectralGrid(n, period); }

DyadicShell make_shell(double N, const SpectralGrid& grid) {
  if (!is_dyadic(N)) throw ConfigError("shell index must be a power of two");
  return {N, 2.0 * N < grid.max_wavenumber()};
}

}  // namespace fnls
