#include "fnls/hierarchy.hpp"

#include <array>
#include <cmath>

#include "fnls/error.hpp"
#include "fnls/spectral.hpp"

namespace fnls {

PairField PairField::from_field(const ComplexField& u) { return {u, conjugate(u)}; }

namespace {

void require_decay(const ComplexField& f, const char* what) {
  const double ratio = boundary_ratio(f);
  if (ratio > kDecayTolerance)
    throw ResolutionError(std::string(what) + " does not decay at the domain boundary (ratio " + std::to_string(ratio) +
                       ")");
}

// int_x^{Xmax} g dy via mean (Xmax - x) + A(x_0) - A(x), with A the periodic antiderivative of g - mean.
ComplexField tail_integral(const ComplexField& g) {
  const auto& grid = g.grid;
  auto spec = to_spectrum(g);
  const cplx mean = spec[0] / static_cast<double>(grid.n());
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const double xi = grid.wavenumber(j);
    spec[j] = (j == 0 || grid.is_nyquist(j)) ? cplx{} : spec[j] / cplx{0.0, xi};
  }
  const auto anti = from_spectrum(grid, spec);
  const double x_max = 0.5 * grid.period();
  ComplexField out(grid);
  for (std::size_t j = 0; j < grid.n(); ++j)
    out.values[j] = mean * (x_max - grid.x(j)) + anti.values[0] - anti.values[j];
  return out;
}

PairField combine(const PairField& a, const PairField& b, cplx cb) {
  return {a.first + cb * b.first, a.second + cb * b.second};
}

}  // namespace

PairField d1_apply(const PairField& v) { return {derivative(v.first), cplx{-1.0, 0.0} * derivative(v.second)}; }

PairField d2_apply(const PairField& base, const PairField& v) {
  require_decay(base.first, "base field");
  require_decay(base.second, "base field");
  require_decay(v.first, "operand");
  require_decay(v.second, "operand");
  const auto vy = derivative(v.first);
  const auto wy = derivative(v.second);
  ComplexField integrand(base.first.grid);
  for (std::size_t j = 0; j < integrand.size(); ++j)
    integrand.values[j] = base.second.values[j] * vy.values[j] + base.first.values[j] * wy.values[j];
  const auto tail = tail_integral(integrand);
  PairField out{ComplexField(base.first.grid), ComplexField(base.first.grid)};
  for (std::size_t j = 0; j < integrand.size(); ++j) {
    out.first.values[j] = -base.first.values[j] * tail.values[j];
    out.second.values[j] = -base.second.values[j] * tail.values[j];
  }
  return out;
}

PairField recursion_apply(const PairField& base, const PairField& v) {
  const auto inner = combine(d1_apply(v), d2_apply(base, v), cplx{0.0, 1.0});
  return {cplx{0.0, 0.5} * inner.first, cplx{0.0, 0.5} * inner.second};
}

ComplexField hierarchy_rhs(const ComplexField& u, int n) {
  if (n != 1 && n != 2) throw ConfigError("hierarchy level must be 1 or 2");
  const auto base = PairField::from_field(u);
  PairField w = base;
  // -2i Lambda = D1 + i D2
  for (int k = 0; k < 2 * n - 1; ++k) w = combine(d1_apply(w), d2_apply(base, w), cplx{0.0, 1.0});
  return derivative(w.first);
}

ComplexField hierarchy_nonlinear_part(const ComplexField& u, int n) {
  return hierarchy_rhs(u, n) - derivative(u, 2 * n);
}

ComplexField hierarchy_nonlinearity(const ComplexField& u) {
  return cplx{-1.0, 0.0} * hierarchy_nonlinear_part(u, 2);
}

double hierarchy_vs_explicit(const ComplexField& u, const NonlinearitySpec& spec) {
  const auto flow = hierarchy_nonlinearity(u);
  const auto expl = evaluate_nonlinearity(spec, u);
  return relative_l2(flow, expl, expl);
}

double hierarchy_vs_explicit(const ComplexField& u) {
  return hierarchy_vs_explicit(u, builtin::dnls_hierarchy_n2());
}

std::vector<DegreeGap> hierarchy_degree_gaps(const ComplexField& u, const NonlinearitySpec& spec) {
  // p(e) = e^3 c3 + e^5 c5 + e^7 c7 sampled at three amplitudes, inverted exactly.
  constexpr std::array<double, 3> amps{0.5, 1.0, 1.5};
  constexpr std::array<int, 3> degrees{3, 5, 7};
  std::array<std::array<double, 3>, 3> a{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) a[r][c] = std::pow(amps[r], degrees[c]);
  // Inverse of the 3x3 matrix by cofactors.
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  std::array<std::array<double, 3>, 3> inv{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const int r1 = (c + 1) % 3, r2 = (c + 2) % 3, c1 = (r + 1) % 3, c2 = (r + 2) % 3;
      inv[r][c] = (a[r1][c1] * a[r2][c2] - a[r1][c2] * a[r2][c1]) / det;
    }
  std::array<ComplexField, 3> flow_samples{ComplexField(u.grid), ComplexField(u.grid), ComplexField(u.grid)};
  std::array<ComplexField, 3> expl_samples = flow_samples;
  for (int r = 0; r < 3; ++r) {
    const auto scaled = cplx{amps[r], 0.0} * u;
    flow_samples[r] = hierarchy_nonlinearity(scaled);
    expl_samples[r] = evaluate_nonlinearity(spec, scaled);
  }
  std::vector<DegreeGap> out;
  for (int d = 0; d < 3; ++d) {
    ComplexField fp(u.grid), ep(u.grid);
    for (int r = 0; r < 3; ++r) {
      fp = fp + cplx{inv[d][r], 0.0} * flow_samples[r];
      ep = ep + cplx{inv[d][r], 0.0} * expl_samples[r];
    }
    const double en = l2_norm(ep);
    out.push_back({static_cast<std::size_t>(degrees[d]), relative_l2(fp, ep, ep), l2_norm(fp), en});
  }
  return out;
}

}  // namespace fnls
