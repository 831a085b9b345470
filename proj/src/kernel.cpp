#include "fnls/kernel.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "fnls/error.hpp"

namespace fnls {
namespace {

constexpr double kRayAngle = kPi / 32.0;
constexpr double kDecayExponent = 40.0;

// Integral over xi >= 0 of 2 cos(x xi) exp(i t xi^4 - (xi/cutoff)^8) along xi = s e^{i theta}, t > 0.
cplx tapered_half_line(double t, double x, double cutoff) {
  const cplx ray{std::cos(kRayAngle), std::sin(kRayAngle)};
  const double grow = std::abs(x) * std::sin(kRayAngle);
  const double decay = t * std::sin(4.0 * kRayAngle);
  double s_max = 1.0;
  for (int it = 0; it < 60; ++it) s_max = std::pow((kDecayExponent + grow * s_max) / decay, 0.25);
  const double taper_floor = std::cos(8.0 * kRayAngle);
  const double s_taper = cutoff * std::pow((kDecayExponent + grow * s_max) / taper_floor, 0.125);
  s_max = std::min(s_max, s_taper);

  const double rate = std::abs(x) + 4.0 * t * s_max * s_max * s_max + 8.0 * std::pow(s_max / cutoff, 7.0) / cutoff;
  const auto panels = static_cast<std::size_t>(std::ceil(s_max * rate / kPi)) + 16;
  const double h = s_max / static_cast<double>(panels);
  const cplx ray4 = ray * ray * ray * ray;
  const cplx ray8 = ray4 * ray4;
  const cplx it4{0.0, t};
  cplx acc{};
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = h * static_cast<double>(p);
    auto integrand = [&](double s) {
      const cplx xi = s * ray;
      const double s4 = s * s * s * s;
      const double r8 = std::pow(s / cutoff, 8.0);
      return 2.0 * std::cos(x * xi) * std::exp(it4 * s4 * ray4 - r8 * ray8);
    };
    const auto& abscissa = boost::math::quadrature::gauss<double, 20>::abscissa();
    const auto& weights = boost::math::quadrature::gauss<double, 20>::weights();
    for (std::size_t k = 0; k < abscissa.size(); ++k) {
      const double z = abscissa[k];
      const double wk = weights[k] * 0.5 * h;
      if (z == 0.0) {
        acc += wk * integrand(a + 0.5 * h);
      } else {
        acc += wk * (integrand(a + 0.5 * h * (1.0 + z)) + integrand(a + 0.5 * h * (1.0 - z)));
      }
    }
  }
  return acc * ray / std::sqrt(2.0 * kPi);
}

}  // namespace

std::vector<cplx> kernel_profile(double t, std::span<const double> xs, double cutoff) {
  if (t == 0.0 || !std::isfinite(t)) throw ConfigError("kernel time must be finite and nonzero");
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw ConfigError("kernel cutoff must be positive");
  std::vector<cplx> out(xs.size());
  const double at = std::abs(t);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (!std::isfinite(xs[j])) throw ConfigError("kernel abscissa must be finite");
    const cplx v = tapered_half_line(at, xs[j], cutoff);
    out[j] = t > 0.0 ? v : std::conj(v);
  }
  return out;
}

KernelEvaluation kernel_profile_checked(double t, std::span<const double> xs, double cutoff) {
  auto base = kernel_profile(t, xs, cutoff);
  const auto doubled = kernel_profile(t, xs, 2.0 * cutoff);
  const auto quadrupled = kernel_profile(t, xs, 4.0 * cutoff);
  double delta = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j)
    delta = std::max({delta, std::abs(base[j] - doubled[j]), std::abs(doubled[j] - quadrupled[j])});
  return {std::move(base), delta};
}

cplx kernel_origin_value() {
  return 2.0 * std::tgamma(1.25) * cplx{std::cos(kPi / 8.0), std::sin(kPi / 8.0)} / std::sqrt(2.0 * kPi);
}

}  // namespace fnls
