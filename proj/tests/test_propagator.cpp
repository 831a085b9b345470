#include <doctest.h>

#include <cmath>

#include "fnls/error.hpp"
#include "fnls/inflation.hpp"
#include "fnls/kernel.hpp"
#include "fnls/propagator.hpp"
#include "fnls/spectral.hpp"
#include "fnls/test_fields.hpp"

using namespace fnls;

namespace {

ComplexField packet(const SpectralGrid& g) {
  return make_test_field(field_kind::Gaussian{1.0, 1.0, 0.5, 4.0}, g);
}

SpaceTimeTrace sample(double dt, std::size_t count, const std::function<ComplexField(double)>& at) {
  std::vector<ComplexField> fields;
  for (std::size_t j = 0; j < count; ++j) fields.push_back(at(dt * static_cast<double>(j)));
  return SpaceTimeTrace(0.0, dt, std::move(fields));
}

}  // namespace

TEST_SUITE("propagator") {
  TEST_CASE("free evolution is unitary with a group law") {
    const SpectralGrid g(256, 64.0);
    const auto f = packet(g);
    const LinearSymbol sym(-1.0, 0.7);
    const auto a = free_evolve(f, 0.3, sym);
    CHECK(std::abs(l2_norm(a) - l2_norm(f)) / l2_norm(f) < 1e-14);
    const auto ab = free_evolve(a, 0.45, sym);
    const auto direct = free_evolve(f, 0.75, sym);
    CHECK(relative_l2(ab, direct, f) < 1e-13);
    CHECK(relative_l2(free_evolve(a, -0.3, sym), f, f) < 1e-13);
    // conj(S(t) f) = S(-t) conj(f) for an even symbol.
    CHECK(relative_l2(conjugate(a), free_evolve(conjugate(f), -0.3, sym), f) < 1e-13);
  }

  TEST_CASE("plane wave phase") {
    const SpectralGrid g(64, 2.0 * kPi);
    ComplexField e(g);
    for (std::size_t j = 0; j < g.n(); ++j) e.values[j] = std::polar(1.0, 2.0 * g.x(j));
    const auto out = free_evolve(e, 0.1, LinearSymbol(1.0, 1.0));
    const cplx phase = std::polar(1.0, 0.1 * (16.0 - 4.0));
    CHECK(relative_l2(out, phase * e, e) < 1e-13);
  }

  TEST_CASE("integration weights") {
    for (std::size_t count : {2u, 3u, 4u, 5u, 8u, 11u}) {
      for (double tau : {0.0, 0.5, 1.0, 1.3, static_cast<double>(count - 1)}) {
        if (tau > static_cast<double>(count - 1)) continue;
        const auto w = integration_weights(count, tau);
        REQUIRE(w.size() == count);
        double sum = 0.0, first = 0.0, cubic = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
          const double s = static_cast<double>(j);
          sum += w[j];
          first += w[j] * s;
          cubic += w[j] * s * s * s;
        }
        CHECK(sum == doctest::Approx(tau).epsilon(1e-13));
        CHECK(first == doctest::Approx(0.5 * tau * tau).epsilon(1e-13));
        if (count >= 4) CHECK(cubic == doctest::Approx(std::pow(tau, 4) / 4.0).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("Duhamel integral of a free solution is t times the free solution") {
    const SpectralGrid g(256, 64.0);
    const auto phi = packet(g);
    const LinearSymbol sym;
    const auto trace = sample(0.01, 51, [&](double s) { return free_evolve(phi, s, sym); });
    for (double t : {0.5, 0.37, 0.005}) {
      const auto got = duhamel_integral(trace, t, sym);
      const auto want = t * free_evolve(phi, t, sym);
      CHECK(relative_l2(got, want, want) < 1e-12);
    }
    CHECK(max_abs(duhamel_integral(trace, 0.0, sym)) == 0.0);
    CHECK_THROWS_AS(duhamel_integral(trace, 0.6, sym), ConfigError);
  }

  TEST_CASE("Duhamel integral of constant forcing") {
    const SpectralGrid g(256, 64.0);
    const auto phi = packet(g);
    const LinearSymbol sym;
    const auto trace = sample(0.001, 501, [&](double) { return phi; });
    const double t = 0.4995;
    const auto got = duhamel_integral(trace, t, sym);
    const auto want = apply_multiplier(phi, [&](double xi) { return resonance_factor(sym.rate(xi), t); });
    CHECK(relative_l2(got, want, want) < 1e-8);
  }

  TEST_CASE("resonance factor closed form") {
    for (double w : {0.3, 5.0, -40.0}) {
      for (double t : {0.0, 0.25, 1.0}) {
        const cplx closed = (std::exp(cplx{0.0, w * t}) - 1.0) / cplx{0.0, w};
        CHECK(std::abs(resonance_factor(w, t) - closed) < 1e-13);
      }
    }
    // Near resonance the series t + i w t^2 / 2 applies.
    for (double w : {0.0, 1e-9}) CHECK(std::abs(resonance_factor(w, 0.5) - cplx{0.5, w / 8.0}) < 1e-15);
  }

  TEST_CASE("kernel origin value and self-similarity") {
    const double zero = 0.0;
    const auto k = kernel_profile(1.0, std::span<const double>(&zero, 1), 16.0);
    CHECK(std::abs(k[0] - kernel_origin_value()) < 1e-9);
    const cplx closed = 2.0 * std::tgamma(1.25) * std::polar(1.0, kPi / 8.0) / std::sqrt(2.0 * kPi);
    CHECK(std::abs(kernel_origin_value() - closed) < 1e-15);

    const std::vector<double> zs{-3.0, -0.5, 0.0, 1.0, 2.5};
    const auto base = kernel_profile(1.0, zs, 16.0);
    for (double t : {2.0, 8.0}) {
      std::vector<double> xs;
      for (double z : zs) xs.push_back(z * std::pow(t, 0.25));
      const auto kt = kernel_profile(t, xs, 16.0);
      for (std::size_t j = 0; j < zs.size(); ++j) CHECK(std::abs(std::pow(t, 0.25) * kt[j] - base[j]) < 1e-8);
    }
    const auto checked = kernel_profile_checked(1.0, zs, 16.0);
    CHECK(checked.doubling_delta < 1e-8);
  }
}
