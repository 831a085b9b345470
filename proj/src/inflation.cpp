#include "fnls/inflation.hpp"

#include <algorithm>
#include <cmath>

#include "fnls/error.hpp"

namespace fnls {

double InflationDatum::amplitude() const { return std::pow(N, 0.5 - s); }

cplx resonance_factor(double omega, double t) {
  const double half = 0.5 * omega * t;
  const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
  return t * sinc * std::polar(1.0, half);
}

namespace {

void validate(const InflationDatum& d, int points) {
  if (!(d.N > 1.0) || !is_dyadic(d.N)) throw ConfigError("inflation N must be a dyadic number above 1");
  if (d.gamma < 1 || d.gamma > 3) throw ConfigError("inflation gamma must be 1, 2 or 3");
  if (!std::isfinite(d.s)) throw ConfigError("inflation s must be finite");
  if (points < 2) throw ConfigError("simplex quadrature needs at least 2 points per band");
}

// Band offsets delta = xi - N of the triples contributing to each output slot.
struct Triple {
  double omega;
  cplx weight;
};

struct Simplex {
  std::vector<double> output_xi;
  std::vector<std::vector<Triple>> slots;
  double spacing;
};

cplx ipow(cplx z, int k) {
  cplx r{1.0, 0.0};
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

Simplex build(const InflationDatum& d, const SimplexOptions& opts) {
  validate(d, opts.points_per_band);
  const int M = opts.points_per_band;
  const double w = d.half_width();
  const double h = 2.0 * w / M;
  const double N = d.N;
  auto offset = [&](int j) { return -w + h * (j + 0.5); };
  Simplex out;
  out.spacing = h;
  const int slots = 3 * M - 2;
  out.output_xi.resize(slots);
  out.slots.resize(slots);
  const double amp3 = std::pow(d.amplitude(), 3);
  const double base = amp3 * h * h / (2.0 * kPi);
  for (int q = 0; q < slots; ++q) out.output_xi[q] = N + offset(q - (M - 1));
  for (int j1 = 0; j1 < M; ++j1) {
    for (int j3 = 0; j3 < M; ++j3) {
      for (int j2 = 0; j2 < M; ++j2) {
        const int q = j1 - j2 + j3 + (M - 1);
        const double d1 = offset(j1), d2 = offset(j2), d3 = offset(j3);
        const double dd = d1 - d2 + d3;
        auto p2 = [](double a) { return a * a; };
        auto p3 = [](double a) { return a * a * a; };
        auto p4 = [](double a) { return a * a * a * a; };
        const double omega = 6.0 * N * N * (p2(d1) - p2(d2) + p2(d3) - p2(dd)) +
                             4.0 * N * (p3(d1) - p3(d2) + p3(d3) - p3(dd)) + (p4(d1) - p4(d2) + p4(d3) - p4(dd));
        cplx weight = base;
        if (opts.placement == DerivativePlacement::inner) {
          const cplx i{0.0, 1.0};
          weight *= ipow(i * (N + d1), d.gamma) * std::conj(ipow(i * (N + d2), d.gamma)) * ipow(i * (N + d3), d.gamma);
        }
        out.slots[q].push_back({omega, weight});
      }
    }
  }
  if (opts.placement == DerivativePlacement::outer) {
    for (int q = 0; q < slots; ++q) {
      const cplx factor = ipow(cplx{0.0, out.output_xi[q]}, d.gamma);
      for (auto& tr : out.slots[q]) tr.weight *= factor;
    }
  }
  return out;
}

std::vector<cplx> evaluate(const Simplex& sx, double t) {
  std::vector<cplx> out(sx.output_xi.size());
  for (std::size_t q = 0; q < out.size(); ++q) {
    cplx acc{};
    for (const auto& tr : sx.slots[q]) acc += tr.weight * resonance_factor(tr.omega, t);
    out[q] = acc;
  }
  return out;
}

double sobolev(const Simplex& sx, const std::vector<cplx>& spec, double s) {
  double acc = 0.0;
  for (std::size_t q = 0; q < spec.size(); ++q)
    acc += std::pow(1.0 + std::abs(sx.output_xi[q]), 2.0 * s) * std::norm(spec[q]);
  return std::sqrt(acc * sx.spacing);
}

}  // namespace

std::vector<double> simplex_output_frequencies(const InflationDatum& datum, int points_per_band) {
  validate(datum, points_per_band);
  const int M = points_per_band;
  const double w = datum.half_width();
  const double h = 2.0 * w / M;
  std::vector<double> xi(3 * M - 2);
  for (int q = 0; q < 3 * M - 2; ++q) xi[q] = datum.N - w + h * (q - (M - 1) + 0.5);
  return xi;
}

std::vector<cplx> third_iterate_spectrum(const InflationDatum& datum, double t, const SimplexOptions& opts) {
  return evaluate(build(datum, opts), t);
}

double third_iterate_sobolev(const InflationDatum& datum, double t, const SimplexOptions& opts) {
  const auto sx = build(datum, opts);
  return sobolev(sx, evaluate(sx, t), datum.s);
}

double sup_third_iterate_sobolev(const InflationDatum& datum, const SimplexOptions& opts) {
  if (opts.time_samples < 2 || !(opts.horizon > 0.0)) throw ConfigError("inflation sweep needs >= 2 times and T > 0");
  const auto sx = build(datum, opts);
  double best = 0.0;
  for (std::size_t k = 0; k < opts.time_samples; ++k) {
    const double t = opts.horizon * static_cast<double>(k) / static_cast<double>(opts.time_samples - 1);
    best = std::max(best, sobolev(sx, evaluate(sx, t), datum.s));
  }
  return best;
}

}  // namespace fnls
