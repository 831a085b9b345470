#include <doctest.h>

#include <cmath>
#include <random>

#include "fnls/bump.hpp"
#include "fnls/error.hpp"
#include "fnls/fft.hpp"
#include "fnls/field.hpp"
#include "fnls/inflation.hpp"
#include "fnls/spectral.hpp"
#include "fnls/test_fields.hpp"

using namespace fnls;

namespace {

ComplexField plane_wave(const SpectralGrid& g, double k, cplx amp = 1.0) {
  ComplexField f(g);
  for (std::size_t j = 0; j < g.n(); ++j) f.values[j] = amp * std::polar(1.0, k * g.x(j));
  return f;
}

ComplexField random_field(const SpectralGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  ComplexField f(g);
  for (auto& v : f.values) v = {d(rng), d(rng)};
  return f;
}

double max_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a.values[j] - b.values[j]));
  return m;
}

}  // namespace

TEST_SUITE("spectral_core") {
  TEST_CASE("grid lattice and validation") {
    const SpectralGrid g(16, 2.0 * kPi);
    const auto lat = g.lattice();
    REQUIRE(lat.size() == 16);
    for (int j = 0; j < 16; ++j) CHECK(lat[j] == doctest::Approx(j - 8.0));
    CHECK(SpectralGrid(1024, 256.0 * kPi).dk() == doctest::Approx(1.0 / 128.0));
    CHECK(g.dx() * static_cast<double>(g.n()) == doctest::Approx(g.period()).epsilon(1e-15));
    CHECK_THROWS_AS(SpectralGrid(15, 1.0), ConfigError);
    CHECK_THROWS_AS(SpectralGrid(8, 1.0), ConfigError);
    CHECK_THROWS_AS(SpectralGrid(16, -1.0), ConfigError);
    CHECK(make_grid(64, 3.0) == make_grid(64, 3.0));
    CHECK(g.is_nyquist(8));
    CHECK(g.wavenumber(9) == doctest::Approx(-7.0));
  }

  TEST_CASE("dyadic shells") {
    CHECK(is_dyadic(0.25));
    CHECK(is_dyadic(64.0));
    CHECK_FALSE(is_dyadic(3.0));
    const SpectralGrid g(64, 2.0 * kPi);  // max wavenumber 32
    CHECK(make_shell(8.0, g).resolvable);
    CHECK_FALSE(make_shell(16.0, g).resolvable);
    CHECK_THROWS_AS(make_shell(3.0, g), ConfigError);
  }

  TEST_CASE("fft round trip and Parseval") {
    const SpectralGrid g(256, 10.0);
    const auto f = random_field(g, 1);
    const auto back = from_spectrum(g, to_spectrum(f));
    CHECK(relative_l2(back, f, f) < 1e-14);
    CHECK(std::abs(l2_norm(f) - spectral_l2_norm(f)) / l2_norm(f) < 1e-13);
  }

  TEST_CASE("bump profile") {
    for (auto kind : {BumpKind::smooth, BumpKind::sharp}) {
      const BumpProfile b{kind};
      CHECK(b.phi(0.0) == 1.0);
      CHECK(b.phi(1.0) == 1.0);
      CHECK(b.phi(2.0) == 0.0);
      CHECK(b.phi(3.0) == 0.0);
      for (double r = -2.5; r <= 2.5; r += 0.01) {
        CHECK(b.phi(r) >= 0.0);
        CHECK(b.phi(r) <= 1.0);
        CHECK(b.phi(r) == b.phi(-r));
      }
    }
    const BumpProfile smooth;
    // Monotone bridge, with all derivatives vanishing at both ends.
    for (double r = 1.0; r < 2.0; r += 0.01) CHECK(smooth.phi(r + 0.01) <= smooth.phi(r));
    CHECK(1.0 - smooth.phi(1.05) < 1e-8);
    CHECK(smooth.phi(1.95) < 1e-8);
    CHECK(BumpProfile{BumpKind::sharp}.phi(1.41) == 1.0);
    CHECK(BumpProfile{BumpKind::sharp}.phi(1.42) == 0.0);
  }

  TEST_CASE("fourier multipliers on plane waves") {
    const SpectralGrid g(64, 2.0 * kPi);
    const auto f = plane_wave(g, 3.0);
    CHECK(max_diff(derivative(f, 1), plane_wave(g, 3.0, cplx{0.0, 3.0})) < 1e-12);
    CHECK(max_diff(fourier_multiplier(f, symbol::FracInhomog{0.0}), f) < 1e-13);
    const auto h = fourier_multiplier(plane_wave(g, 4.0), symbol::FracHomog{-0.25});
    CHECK(max_diff(h, plane_wave(g, 4.0, std::pow(4.0, -0.25))) < 1e-13);
    // Zero mode of a negative homogeneous symbol is mapped to 0.
    const auto c = fourier_multiplier(plane_wave(g, 0.0), symbol::FracHomog{-0.5});
    CHECK(max_abs(c) < 1e-15);
    CHECK_THROWS_AS(fourier_multiplier(f, symbol::FracHomog{NAN}), ConfigError);
    CHECK_THROWS_AS(derivative(f, -1), ConfigError);
  }

  TEST_CASE("Littlewood-Paley projections") {
    const SpectralGrid g(256, 2.0 * kPi);
    const auto e8 = plane_wave(g, 8.0);
    CHECK(max_diff(lp_project(e8, projection::Shell{8.0}), e8) < 1e-12);
    CHECK(max_abs(lp_project(plane_wave(g, -3.0), projection::Plus{})) < 1e-13);
    CHECK_THROWS_AS(lp_project(e8, projection::Shell{64.0}), ResolutionError);

    // Telescoping partition of unity on band-limited data.
    auto f = random_field(g, 2);
    f = apply_multiplier(f, [](double xi) { return std::abs(xi) < 30.0 ? cplx{1.0} : cplx{}; });
    ComplexField sum = lp_project(f, projection::Low{1.0});
    for (double N = 2.0; N <= 32.0; N *= 2.0) sum = sum + lp_project(f, projection::Shell{N});
    CHECK(relative_l2(sum, f, f) < 1e-12);

    // Idempotence and the squared-weight identity.
    const auto plus = lp_project(f, projection::Plus{});
    CHECK(relative_l2(lp_project(plus, projection::Plus{}), plus, plus) < 1e-14);
    const auto twice = lp_project(lp_project(f, projection::Shell{8.0}), projection::Shell{8.0});
    const BumpProfile b;
    const auto squared = apply_multiplier(f, [&](double xi) { return cplx{std::pow(b.psi(8.0, std::abs(xi)), 2)}; });
    CHECK(relative_l2(twice, squared, squared) < 1e-13);
    CHECK(relative_l2(lp_project(f, projection::Low{4.0}) + lp_project(f, projection::High{4.0}), f, f) < 1e-14);
  }

  TEST_CASE("Sobolev norms") {
    const double P = 2.0 * kPi;
    const SpectralGrid g(64, P);
    const auto e3 = plane_wave(g, 3.0);
    CHECK(sobolev_norm(e3, 0.0, false) == doctest::Approx(l2_norm(e3)).epsilon(1e-13));
    CHECK(sobolev_norm(e3, 1.0, false) == doctest::Approx(4.0 * std::sqrt(P)).epsilon(1e-13));
    CHECK(sobolev_norm(e3, 0.5, true) == doctest::Approx(std::sqrt(3.0) * std::sqrt(P)).epsilon(1e-13));
  }

  TEST_CASE("inflation datum norm is the exact band Riemann sum") {
    const double N = 8.0;
    const SpectralGrid g(2048, 512.0);
    for (double s : {0.0, -0.25, 0.5}) {
      const auto f = make_test_field(field_kind::Inflation{InflationDatum{N, s, 1}}, g);
      double oracle = 0.0;
      for (double xi : g.wavenumbers())
        if (xi >= N - 1.0 / N && xi < N + 1.0 / N) oracle += std::pow(N, 1.0 - 2.0 * s) * std::pow(1.0 + xi, 2.0 * s);
      oracle = std::sqrt(oracle * g.dk());
      CHECK(sobolev_norm(f, s, false) == doctest::Approx(oracle).epsilon(1e-12));
    }
    const auto f0 = make_test_field(field_kind::Inflation{InflationDatum{N, 0.0, 1}}, g);
    CHECK(std::pow(l2_norm(f0), 2) == doctest::Approx(2.0).epsilon(0.05));
    CHECK_THROWS_AS(make_test_field(field_kind::Inflation{InflationDatum{N, 0.0, 1}}, SpectralGrid(2048, 16.0)),
                    ResolutionError);
  }

  TEST_CASE("Bernstein ratios are uniform across shells") {
    for (double s : {0.5, 1.0}) {
      for (int sign : {1, -1}) {
        double lo = 1e300, hi = 0.0;
        for (double N = 2.0; N <= 64.0; N *= 2.0) {
          const SpectralGrid g(4096, 2048.0 / N);
          const auto f = lp_project(make_test_field(field_kind::RandomBand{N, 11}, g), projection::Shell{N});
          const auto d = fourier_multiplier(f, symbol::FracHomog{sign * s});
          for (bool sup : {false, true}) {
            const double r = sup ? max_abs(d) / (std::pow(N, sign * s) * max_abs(f))
                                 : l2_norm(d) / (std::pow(N, sign * s) * l2_norm(f));
            lo = std::min(lo, r);
            hi = std::max(hi, r);
          }
        }
        CHECK(lo > 0.1);
        CHECK(hi < 8.0);
      }
    }
  }

  TEST_CASE("test fields") {
    const SpectralGrid g(1024, 64.0);
    CHECK(max_abs(make_test_field(field_kind::Gaussian{0.0, 0.0, 1.0, 1.0}, g)) == 0.0);
    const auto band = make_test_field(field_kind::RandomBand{4.0, 5}, g);
    const auto spec = to_spectrum(band);
    double outside = 0.0, peak = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j) {
      const double a = std::abs(g.wavenumber(j));
      peak = std::max(peak, std::abs(spec[j]));
      if (a < 2.0 || a > 8.0) outside = std::max(outside, std::abs(spec[j]));
    }
    CHECK(outside < 1e-13 * peak);
    const auto again = make_test_field(field_kind::RandomBand{4.0, 5}, g);
    CHECK(max_diff(band, again) == 0.0);
    // Centered packet: the continuum convention puts the mass near x = 0, not at the edge.
    CHECK(boundary_ratio(band) < 1e-3);
  }
}
