#include <doctest.h>

#include <cmath>
#include <random>

#include "fnls/bilinear.hpp"
#include "fnls/error.hpp"
#include "fnls/estimates.hpp"
#include "fnls/modulation.hpp"
#include "fnls/norms.hpp"
#include "fnls/propagator.hpp"
#include "fnls/solver.hpp"
#include "fnls/spectral.hpp"
#include "fnls/test_fields.hpp"

using namespace fnls;

namespace {

SpaceTimeTrace free_trace(const ComplexField& u0, double dt, std::size_t count, const LinearSymbol& sym = {}) {
  std::vector<ComplexField> snaps;
  for (std::size_t j = 0; j < count; ++j) snaps.push_back(free_evolve(u0, dt * static_cast<double>(j), sym));
  return SpaceTimeTrace(0.0, dt, std::move(snaps));
}

SpaceTimeTrace scaled(const SpaceTimeTrace& t, cplx c) {
  std::vector<ComplexField> snaps;
  for (const auto& f : t.fields()) snaps.push_back(c * f);
  return SpaceTimeTrace(t.t0(), t.dt(), std::move(snaps));
}

ComplexField shell_data(const SpectralGrid& g, double N, std::uint64_t seed) {
  return lp_project(make_test_field(field_kind::RandomBand{N, seed}, g), projection::Shell{N});
}

ComplexField mode(const SpectralGrid& g, double k) {
  ComplexField e(g);
  for (std::size_t j = 0; j < g.n(); ++j) e.values[j] = std::polar(1.0, k * g.x(j));
  return e;
}

ComplexField band_limited(const SpectralGrid& g, long band, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<cplx> spec(g.n());
  for (std::size_t j = 0; j < g.n(); ++j)
    if (std::labs(g.signed_index(j)) <= band) spec[j] = {d(rng), d(rng)};
  return from_spectrum(g, spec);
}

}  // namespace

TEST_SUITE("analysis_norms") {
  TEST_CASE("mixed norms of a constant field") {
    const SpectralGrid g(32, 3.0);
    const cplx c{0.6, -0.8};
    ComplexField f(g);
    for (auto& v : f.values) v = c;
    const SpaceTimeTrace t(0.0, 0.1, std::vector<ComplexField>(11, f));
    const double S = 1.0;
    CHECK(mixed_norm(t, Outer::time, 2.0, 2.0) == doctest::Approx(std::abs(c) * std::sqrt(S * 3.0)).epsilon(1e-13));
    CHECK(mixed_norm(t, Outer::time, kInf, kInf) == doctest::Approx(std::abs(c)).epsilon(1e-15));
    CHECK(mixed_norm(t, Outer::space, 4.0, kInf) == doctest::Approx(std::abs(c) * std::pow(3.0, 0.25)).epsilon(1e-13));
    CHECK_THROWS_AS(mixed_norm(t, Outer::time, 0.5, 2.0), ConfigError);
  }

  TEST_CASE("mixed norm nesting, homogeneity and majorization") {
    const SpectralGrid g(256, 40.0);
    const auto u0 = make_test_field(field_kind::Gaussian{1.0, 0.0, 1.0, 2.0}, g);
    const auto t = free_trace(u0, 0.01, 41);
    CHECK(mixed_norm(t, Outer::time, 2.0, 2.0) ==
          doctest::Approx(mixed_norm(t, Outer::space, 2.0, 2.0)).epsilon(1e-12));
    const cplx c{0.0, -3.0};
    for (auto outer : {Outer::time, Outer::space})
      for (double q : {2.0, 4.0, kInf})
        for (double r : {2.0, kInf})
          CHECK(mixed_norm(scaled(t, c), outer, q, r) == doctest::Approx(3.0 * mixed_norm(t, outer, q, r)).epsilon(1e-13));

    // |u| <= |w| pointwise gives ordered norms.
    std::vector<ComplexField> bigger;
    for (const auto& f : t.fields()) {
      ComplexField w = f;
      for (std::size_t j = 0; j < w.size(); ++j) w.values[j] = std::abs(f.values[j]) + 0.1;
      bigger.push_back(std::move(w));
    }
    const SpaceTimeTrace tw(0.0, 0.01, std::move(bigger));
    CHECK(mixed_norm(t, Outer::space, 4.0, kInf) <= mixed_norm(tw, Outer::space, 4.0, kInf));
    CHECK(mixed_norm(t, Outer::time, 4.0, kInf) <= mixed_norm(tw, Outer::time, 4.0, kInf));
  }

  TEST_CASE("X_N breakdown") {
    const SpectralGrid g(1024, 32.0 * kPi);
    const auto zero = xn_components(SpaceTimeTrace(0.0, 0.01, std::vector<ComplexField>(5, ComplexField(g))), 4.0);
    CHECK(zero.weighted_total == 0.0);
    CHECK(zero.l4t_linfx == 0.0);

    const auto f = shell_data(g, 4.0, 7);
    const auto t = free_trace(f, 1e-4, 201);
    const auto b = xn_norm(t, 4.0);
    CHECK(b.weighted_total == xn_weighted_total(b));
    const double expected = b.l_inf_t_l2x + std::sqrt(4.0) * b.l4t_linfx + std::pow(4.0, -1.01) * b.l2x_linft +
                            std::pow(4.0, -0.25) * b.l4x_linft + std::pow(4.0, 1.5) * b.linfx_l2t;
    CHECK(b.weighted_total == doctest::Approx(expected).epsilon(1e-15));
    const auto b2 = xn_norm(scaled(t, 2.0), 4.0);
    CHECK(b2.weighted_total == doctest::Approx(2.0 * b.weighted_total).epsilon(1e-13));
    CHECK(b2.linfx_l2t == doctest::Approx(2.0 * b.linfx_l2t).epsilon(1e-13));

    // Data outside the shell fails the localization check.
    CHECK_THROWS_AS(xn_norm(free_trace(shell_data(g, 1.0, 7), 1e-4, 5), 4.0), ConfigError);
  }

  TEST_CASE("free solutions are uniformly bounded in X_N") {
    double lo = 1e300, hi = 0.0;
    for (double N : {1.0, 2.0, 4.0}) {
      const SpectralGrid g(1024, 32.0 * kPi);
      const auto f = shell_data(g, N, 3);
      const double r = xn_norm(free_trace(f, 1e-4, 501), N).weighted_total / l2_norm(f);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(hi / lo < 4.0);
  }

  TEST_CASE("X^s aggregation") {
    const SpectralGrid g(1024, 32.0 * kPi);
    const auto t2 = free_trace(shell_data(g, 2.0, 1), 1e-4, 21);
    const auto t8 = free_trace(shell_data(g, 8.0, 2), 1e-4, 21);
    const double x2 = xn_norm(t2, 2.0).weighted_total;
    const double x8 = xn_norm(t8, 8.0).weighted_total;
    const std::vector<ShellTrace> one{{8.0, false, t8}};
    CHECK(xs_norm(one, 0.5) == doctest::Approx(std::sqrt(8.0) * x8).epsilon(1e-13));
    const std::vector<ShellTrace> two{{2.0, false, t2}, {8.0, false, t8}};
    CHECK(xs_norm(two, 0.0) == doctest::Approx(std::hypot(x2, x8)).epsilon(1e-12));
    CHECK(xs_norm(two, -0.5) < xs_norm(two, 0.0));
    CHECK(xs_norm(two, 0.0) < xs_norm(two, 0.5));
    const std::vector<ShellTrace> overlap{{8.0, false, t8}, {8.0, false, t8}};
    CHECK_THROWS_AS(xs_norm(overlap, 0.0), ConfigError);
  }

  TEST_CASE("modulation partition and concentration") {
    const SpectralGrid g(64, 8.0 * kPi);
    const auto u0 = make_test_field(field_kind::Gaussian{1.0, 0.0, 0.5, 3.0}, g);
    const ModulationAnalysis m(free_trace(u0, 0.01, 512));

    const auto windowed = m.windowed();
    std::vector<ComplexField> sum = m.project_low().fields();
    for (double A : m.blocks()) {
      const auto p = m.project(A);
      for (std::size_t j = 0; j < sum.size(); ++j) sum[j] = sum[j] + p[j];
    }
    const double scale = mixed_norm(windowed, Outer::time, kInf, 2.0);
    CHECK(sup_time_l2_distance(SpaceTimeTrace(windowed.t0(), windowed.dt(), sum), windowed) < 1e-10 * scale);

    const double floor = m.window_floor();
    double far = 0.0;
    for (double A : m.blocks())
      if (A >= 2.0 * floor) far += m.block_mass(A);
    CHECK(far < 1e-6 * m.total_mass());
    CHECK_FALSE(m.resolvable(1e6));
  }

  TEST_CASE("modulation of a single space-time mode") {
    const SpectralGrid g(64, 2.0 * kPi);
    const auto e = mode(g, 1.0);
    std::vector<ComplexField> snaps;
    const double omega = 1.0 + 64.0;
    for (std::size_t j = 0; j < 512; ++j) snaps.push_back(std::polar(1.0, omega * 0.01 * static_cast<double>(j)) * e);
    const ModulationAnalysis m(SpaceTimeTrace(0.0, 0.01, std::move(snaps)));
    double best = 0.0, best_mass = -1.0;
    for (double A : m.blocks())
      if (m.block_mass(A) > best_mass) {
        best_mass = m.block_mass(A);
        best = A;
      }
    CHECK(best == 64.0);
  }

  TEST_CASE("frequency-restricted products") {
    const SpectralGrid g(64, 2.0 * kPi);
    const BumpProfile bump;
    const double k1 = 9.0, k2 = 3.0;
    const auto f = mode(g, k1), h = mode(g, k2);
    const auto fh = exact_product(f, h);
    for (double L : {2.0, 4.0, 8.0}) {
      const auto minus = rl_bilinear(f, h, L, PairSign::minus);
      CHECK(relative_l2(minus, bump.psi(L, k1 - k2) * fh, fh) < 1e-13);
      const auto plus = rl_bilinear(f, h, L, PairSign::plus);
      CHECK(relative_l2(plus, bump.psi(L, k1 + k2) * fh, fh) < 1e-13);
    }

    // Summing over dyadic L restores the product up to the diagonal.
    const auto a = band_limited(g, 7, 1);
    const auto b = band_limited(g, 7, 2);
    const auto as = to_spectrum(a), bs = to_spectrum(b);
    std::vector<cplx> diag(g.n());
    for (std::size_t i = 0; i < g.n(); ++i)
      for (std::size_t j = 0; j < g.n(); ++j)
        if (!g.is_nyquist(i) && g.signed_index(i) == g.signed_index(j)) {
          const long s = 2 * g.signed_index(i);
          if (std::labs(s) < static_cast<long>(g.n() / 2)) {
            const auto slot = static_cast<std::size_t>((s + static_cast<long>(g.n())) % static_cast<long>(g.n()));
            diag[slot] += as[i] * bs[j] / static_cast<double>(g.n());
          }
        }
    ComplexField total(g);
    for (double L = 0.25; L <= 16.0; L *= 2.0) total = total + rl_bilinear(a, b, L, PairSign::minus);
    const auto want = exact_product(a, b) - from_spectrum(g, diag);
    CHECK(relative_l2(total, want, want) < 1e-10);
  }

  TEST_CASE("estimate preconditions and quick ratios") {
    const SpectralGrid g(1024, 256.0);
    EstimateParams p;
    p.N1 = 4.0;
    p.N2 = 4.0;
    const auto f = make_test_field(field_kind::RandomBand{4.0, 1}, g);
    CHECK_THROWS_AS(estimate_ratio(EstimateKind::bilinear, p, f, f), ConfigError);
    CHECK_THROWS_AS(estimate_ratio(EstimateKind::bilinear, p, f), ConfigError);
    CHECK(estimate_kind_from_string(to_string(EstimateKind::kenig_ruiz)) == EstimateKind::kenig_ruiz);
    CHECK_THROWS_AS(estimate_kind_from_string("bogus"), ConfigError);

    for (auto kind : {EstimateKind::strichartz, EstimateKind::kato}) {
      std::vector<double> ratios;
      for (double N : {2.0, 4.0}) {
        EstimateParams q;
        q.N = N;
        q.check_refinement = true;
        const SpectralGrid gn(1024, 512.0 / N);
        const auto r = estimate_ratio(kind, q, make_test_field(field_kind::RandomBand{N, 2}, gn));
        CHECK(r.ratio > 0.0);
        CHECK(r.refinement_delta < 1e-2);
        CHECK(r.boundary_ratio < 1e-6);
        ratios.push_back(r.ratio);
      }
      CHECK(ratios[1] / ratios[0] == doctest::Approx(1.0).epsilon(0.5));
    }
  }
}
