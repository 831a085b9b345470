#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fnls {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Uniform periodic grid on [-period/2, period/2).  Fourier data are kept in
// FFT order: index j maps to the signed mode j for j < n/2 and j - n above;
// index n/2 is the unpaired Nyquist mode.
class SpectralGrid {
 public:
  SpectralGrid(std::size_t n, double period);

  std::size_t n() const { return n_; }
  double period() const { return period_; }
  double dx() const { return period_ / static_cast<double>(n_); }
  double dk() const { return 2.0 * kPi / period_; }
  double max_wavenumber() const { return kPi / dx(); }

  long signed_index(std::size_t j) const;
  bool is_nyquist(std::size_t j) const { return j == n_ / 2; }
  double wavenumber(std::size_t j) const { return dk() * static_cast<double>(signed_index(j)); }
  double x(std::size_t j) const { return -0.5 * period_ + static_cast<double>(j) * dx(); }

  // Wavenumbers in FFT order.
  std::vector<double> wavenumbers() const;
  // Wavenumbers sorted ascending, xi_j for j in {-n/2, ..., n/2-1}.
  std::vector<double> lattice() const;
  std::vector<double> points() const;

  bool operator==(const SpectralGrid&) const = default;

 private:
  std::size_t n_;
  double period_;
};

SpectralGrid make_grid(std::size_t n, double period);

bool is_power_of_two(std::size_t n);
// True when N = 2^j for some integer j (negative j allowed).
bool is_dyadic(double N);

struct DyadicShell {
  double N;
  bool resolvable;  // 2N lies strictly below the grid Nyquist wavenumber
};

DyadicShell make_shell(double N, const SpectralGrid& grid);

}  // namespace fnls
