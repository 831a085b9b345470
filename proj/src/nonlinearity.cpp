#include "fnls/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "fnls/error.hpp"
#include "fnls/fft.hpp"
#include "fnls/spectral.hpp"

namespace fnls {

int Monomial::max_order() const {
  int m = 0;
  for (int k : u_orders) m = std::max(m, k);
  for (int k : ubar_orders) m = std::max(m, k);
  return m;
}

namespace {

bool factor_less(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  if (a.u_orders != b.u_orders) return a.u_orders < b.u_orders;
  return a.ubar_orders < b.ubar_orders;
}

}  // namespace

std::vector<Monomial> canonicalize(std::vector<Monomial> terms, bool drop_zeros) {
  for (auto& t : terms) {
    std::sort(t.u_orders.begin(), t.u_orders.end());
    std::sort(t.ubar_orders.begin(), t.ubar_orders.end());
  }
  std::stable_sort(terms.begin(), terms.end(), factor_less);
  std::vector<Monomial> out;
  for (auto& t : terms) {
    if (!out.empty() && out.back().same_factors(t)) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(std::move(t));
    }
  }
  if (drop_zeros) std::erase_if(out, [](const Monomial& m) { return m.coeff == cplx{}; });
  return out;
}

std::vector<Monomial> differentiate(const std::vector<Monomial>& terms) {
  std::vector<Monomial> out;
  for (const auto& t : terms) {
    for (std::size_t i = 0; i < t.u_orders.size(); ++i) {
      Monomial d = t;
      ++d.u_orders[i];
      out.push_back(std::move(d));
    }
    for (std::size_t i = 0; i < t.ubar_orders.size(); ++i) {
      Monomial d = t;
      ++d.ubar_orders[i];
      out.push_back(std::move(d));
    }
  }
  return canonicalize(std::move(out), true);
}

std::vector<Monomial> multiply(const std::vector<Monomial>& a, const std::vector<Monomial>& b) {
  std::vector<Monomial> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      Monomial p{x.coeff * y.coeff, x.u_orders, x.ubar_orders};
      p.u_orders.insert(p.u_orders.end(), y.u_orders.begin(), y.u_orders.end());
      p.ubar_orders.insert(p.ubar_orders.end(), y.ubar_orders.begin(), y.ubar_orders.end());
      out.push_back(std::move(p));
    }
  return canonicalize(std::move(out), true);
}

std::vector<Monomial> scale(std::vector<Monomial> terms, cplx c) {
  for (auto& t : terms) t.coeff *= c;
  return canonicalize(std::move(terms), true);
}

NonlinearitySpec::NonlinearitySpec(int gamma, std::vector<Monomial> monomials) : gamma_(gamma) {
  if (gamma < 1 || gamma > 3) throw ConfigError("gamma must be 1, 2 or 3");
  if (monomials.empty()) throw ConfigError("a nonlinearity needs at least one monomial");
  for (const auto& t : monomials) {
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
      throw ConfigError("monomial coefficient must be finite");
    if (t.degree() < 3) throw ConfigError("monomial degree must be at least 3: " + describe(t));
    for (int k : t.u_orders)
      if (k < 0) throw ConfigError("negative derivative order in " + describe(t));
    for (int k : t.ubar_orders)
      if (k < 0) throw ConfigError("negative derivative order in " + describe(t));
    if (t.max_order() > 3) throw ConfigError("derivative order above 3 in " + describe(t));
    if (t.max_order() > gamma) throw ConfigError("derivative order exceeds gamma in " + describe(t));
  }
  monomials_ = canonicalize(std::move(monomials), false);
  m_ = monomials_.front().degree();
  l_ = monomials_.back().degree();
}

bool NonlinearitySpec::is_zero() const {
  return std::all_of(monomials_.begin(), monomials_.end(), [](const Monomial& t) { return t.coeff == cplx{}; });
}

namespace {

const std::vector<Monomial> kU{{1.0, {0}, {}}};
const std::vector<Monomial> kUbar{{1.0, {}, {0}}};

std::vector<Monomial> power(const std::vector<Monomial>& base, int k) {
  std::vector<Monomial> out{{1.0, {}, {}}};
  for (int i = 0; i < k; ++i) out = multiply(out, base);
  return out;
}

std::vector<Monomial> add(std::vector<Monomial> a, const std::vector<Monomial>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return canonicalize(std::move(a), true);
}

std::vector<Monomial> deriv_n(std::vector<Monomial> t, int n) {
  for (int i = 0; i < n; ++i) t = differentiate(t);
  return t;
}

// Keeps an explicit zero term when every coefficient cancels so degrees stay defined.
NonlinearitySpec finalize(int gamma, std::vector<Monomial> terms, std::size_t degree) {
  if (terms.empty()) {
    Monomial zero{0.0, std::vector<int>(degree - degree / 2, 0), std::vector<int>(degree / 2, 0)};
    terms.push_back(std::move(zero));
  }
  return NonlinearitySpec(gamma, std::move(terms));
}

// |u|^2 u-type building blocks.
std::vector<Monomial> mod_power_times_u(int pairs) { return multiply(power(multiply(kU, kUbar), pairs), kU); }

std::vector<Monomial> quintic_septic_part() {
  const auto ux = deriv_n(kU, 1);
  const auto ubx = deriv_n(kUbar, 1);
  // (3/2) d(|u|^4 u) + 3 (ubar u_x - u ubar_x) |u|^2 u + (5/2) i |u|^6 u
  auto h1 = scale(differentiate(mod_power_times_u(2)), 1.5);
  const auto bracket = add(multiply(kUbar, ux), scale(multiply(kU, ubx), -1.0));
  h1 = add(h1, scale(multiply(bracket, mod_power_times_u(1)), 3.0));
  return add(h1, scale(mod_power_times_u(3), cplx{0.0, 2.5}));
}

}  // namespace

namespace builtin {

NonlinearitySpec general(int gamma, std::vector<Monomial> terms) { return NonlinearitySpec(gamma, std::move(terms)); }

NonlinearitySpec gauge_power(int gamma, const std::vector<cplx>& coeffs) {
  if (coeffs.size() < 4) throw ConfigError("gauge_power needs degree m >= 3 (m + 1 coefficients)");
  const int m = static_cast<int>(coeffs.size()) - 1;
  std::vector<Monomial> poly;
  for (int k = 0; k <= m; ++k) {
    if (!std::isfinite(coeffs[k].real()) || !std::isfinite(coeffs[k].imag()))
      throw ConfigError("gauge_power coefficients must be finite");
    poly.push_back({coeffs[k], std::vector<int>(k, 0), std::vector<int>(m - k, 0)});
  }
  poly = canonicalize(std::move(poly), true);
  if (gamma < 1 || gamma > 3) throw ConfigError("gamma must be 1, 2 or 3");
  return finalize(gamma, deriv_n(poly, gamma), static_cast<std::size_t>(m));
}

NonlinearitySpec fukumoto_moffatt(double mu, double nu) {
  if (!std::isfinite(mu) || !std::isfinite(nu)) throw ConfigError("model parameters must be finite");
  const auto c = fukumoto_moffatt_coefficients(mu, nu);
  std::vector<Monomial> t{
      {-0.5, {0, 0}, {0}},     // |u|^2 u
      {c.l1, {0, 0, 0}, {0, 0}},  // |u|^4 u
      {c.l2, {1, 1}, {0}},     // u_x^2 ubar
      {c.l3, {0, 1}, {1}},     // |u_x|^2 u
      {c.l4, {0, 0}, {2}},     // u^2 ubar_xx
      {c.l5, {0, 2}, {0}},     // |u|^2 u_xx
  };
  return finalize(2, canonicalize(std::move(t), true), 3);
}

NonlinearitySpec dnls_hierarchy_n2() {
  const auto ux = deriv_n(kU, 1);
  // H_2 = -3 u_x^2 ubar + (|u|^2)_xx u
  auto h2 = scale(multiply(multiply(ux, ux), kUbar), -3.0);
  h2 = add(h2, multiply(deriv_n(multiply(kU, kUbar), 2), kU));
  const auto inner = add(quintic_septic_part(), scale(h2, cplx{0.0, 1.0}));
  return finalize(3, differentiate(inner), 3);
}

NonlinearitySpec dnls_hierarchy_n2_from_recursion() {
  const auto ux = deriv_n(kU, 1);
  const auto uxx = deriv_n(kU, 2);
  const auto ubx = deriv_n(kUbar, 1);
  const auto ubxx = deriv_n(kUbar, 2);
  // -i [3 u_x^2 ubar + 4 |u|^2 u_xx + 2 |u_x|^2 u + u^2 ubar_xx]
  auto cubic = scale(multiply(multiply(ux, ux), kUbar), 3.0);
  cubic = add(cubic, scale(multiply(multiply(kU, kUbar), uxx), 4.0));
  cubic = add(cubic, scale(multiply(multiply(ux, ubx), kU), 2.0));
  cubic = add(cubic, multiply(multiply(kU, kU), ubxx));
  const auto inner = add(quintic_septic_part(), scale(cubic, cplx{0.0, -1.0}));
  return finalize(3, differentiate(inner), 3);
}

}  // namespace builtin

FmCoefficients fukumoto_moffatt_coefficients(double mu, double nu) {
  return {0.75 * mu, 2.0 * mu - 0.5 * nu, 4.0 * mu + nu, mu, 2.0 * mu - nu};
}

namespace {

constexpr std::size_t kMaxPaddedSize = std::size_t{1} << 26;

// Zero-padded physical samples of d^k u or d^k conj(u).
std::vector<cplx> padded_factor(const SpectralGrid& grid, const std::vector<cplx>& uhat, int order, bool conj,
                                std::size_t pad) {
  const std::size_t n = grid.n();
  const std::size_t np = n * pad;
  std::vector<cplx> buf(np, cplx{});
  for (std::size_t j = 0; j < n; ++j) {
    if (grid.is_nyquist(j)) continue;
    const long idx = grid.signed_index(j);
    cplx c = conj ? std::conj(uhat[(n - j) % n]) : uhat[j];
    c *= symbol_value(symbol::Deriv{order}, grid.wavenumber(j));
    const std::size_t pos = idx >= 0 ? static_cast<std::size_t>(idx) : np - static_cast<std::size_t>(-idx);
    buf[pos] = c * static_cast<double>(pad);
  }
  fft::inverse_inplace(buf);
  return buf;
}

ComplexField evaluate_terms(const std::vector<Monomial>& terms, const ComplexField& u, std::size_t pad) {
  const auto& grid = u.grid;
  const std::size_t n = grid.n();
  const std::size_t np = n * pad;
  if (np > kMaxPaddedSize)
    throw ResolutionError("dealiasing needs a padded grid of " + std::to_string(np) + " points (limit " +
                          std::to_string(kMaxPaddedSize) + ")");
  const auto uhat = to_spectrum(u);
  std::map<std::pair<int, bool>, std::vector<cplx>> factors;
  auto factor = [&](int order, bool conj) -> const std::vector<cplx>& {
    auto key = std::make_pair(order, conj);
    auto it = factors.find(key);
    if (it == factors.end()) it = factors.emplace(key, padded_factor(grid, uhat, order, conj, pad)).first;
    return it->second;
  };
  std::vector<cplx> acc(np, cplx{});
  std::vector<cplx> prod(np);
  for (const auto& t : terms) {
    if (t.coeff == cplx{}) continue;
    std::fill(prod.begin(), prod.end(), t.coeff);
    for (int k : t.u_orders) {
      const auto& f = factor(k, false);
      for (std::size_t j = 0; j < np; ++j) prod[j] *= f[j];
    }
    for (int k : t.ubar_orders) {
      const auto& f = factor(k, true);
      for (std::size_t j = 0; j < np; ++j) prod[j] *= f[j];
    }
    for (std::size_t j = 0; j < np; ++j) acc[j] += prod[j];
  }
  fft::forward_inplace(acc);
  std::vector<cplx> out(n, cplx{});
  for (std::size_t j = 0; j < n; ++j) {
    if (grid.is_nyquist(j)) continue;
    const long idx = grid.signed_index(j);
    const std::size_t pos = idx >= 0 ? static_cast<std::size_t>(idx) : np - static_cast<std::size_t>(-idx);
    out[j] = acc[pos] / static_cast<double>(pad);
  }
  return from_spectrum(grid, out);
}

}  // namespace

ComplexField evaluate_nonlinearity(const NonlinearitySpec& spec, const ComplexField& u) {
  return evaluate_terms(spec.monomials(), u, spec.pad_factor());
}

ComplexField evaluate_degree(const NonlinearitySpec& spec, const ComplexField& u, std::size_t degree) {
  std::vector<Monomial> subset;
  for (const auto& t : spec.monomials())
    if (t.degree() == degree) subset.push_back(t);
  return evaluate_terms(subset, u, spec.pad_factor());
}

Rational make_rational(long num, long den) {
  if (den == 0) throw ConfigError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long g = std::gcd(num < 0 ? -num : num, den);
  return {num / (g == 0 ? 1 : g), den / (g == 0 ? 1 : g)};
}

RegularityThresholds regularity_thresholds(int gamma, int m) {
  if (gamma < 1 || gamma > 3) throw ConfigError("gamma must be 1, 2 or 3");
  if (m < 3) throw ConfigError("degree m must be at least 3");
  // s_c = 1/2 - (4 - gamma)/(m - 1)
  const Rational sc = make_rational((m - 1) - 2 * (4 - gamma), 2 * (m - 1));
  if (gamma == 3) return {sc, m == 3 ? make_rational(1, 1) : make_rational(1, 2), false};
  if (m == 3) return {sc, make_rational(gamma - 1, 2), false};
  if (m == 4) return {sc, make_rational(2 * gamma - 3, 6), false};
  return {sc, sc, true};
}

namespace {

constexpr double kLocalizationTol = 1e-10;
constexpr double kBandTol = 1e-12;

ComplexField compress_by_two(const ComplexField& u) {
  const auto& g = u.grid;
  const auto spec = to_spectrum(u);
  double peak = 0.0, high = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const double a = std::abs(spec[j]);
    peak = std::max(peak, a);
    if (std::abs(g.wavenumber(j)) >= 0.5 * g.max_wavenumber()) high = std::max(high, a);
  }
  if (peak > 0.0 && high > kBandTol * peak)
    throw ResolutionError("dilation by 2 would push spectral content past Nyquist (ratio " + std::to_string(high / peak) +
                          ")");
  if (boundary_ratio(u) > kLocalizationTol) throw ResolutionError("field is not localized away from the boundary");
  const std::size_t n = g.n();
  ComplexField out(g);
  for (std::size_t j = n / 4; j < 3 * n / 4; ++j) out.values[j] = u.values[2 * j - n / 2];
  return out;
}

ComplexField stretch_by_two(const ComplexField& u) {
  const auto& g = u.grid;
  const std::size_t n = g.n();
  const double peak = max_abs(u);
  double outer = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    if (std::abs(g.x(j)) >= 0.25 * g.period()) outer = std::max(outer, std::abs(u.values[j]));
  if (peak > 0.0 && outer > kLocalizationTol * peak)
    throw ResolutionError("dilation by 1/2 needs the field localized within a quarter period");
  const auto spec = to_spectrum(u);
  std::vector<cplx> fine(2 * n, cplx{});
  for (std::size_t j = 0; j < n; ++j) {
    if (g.is_nyquist(j)) continue;
    const long idx = g.signed_index(j);
    const std::size_t pos = idx >= 0 ? static_cast<std::size_t>(idx) : 2 * n - static_cast<std::size_t>(-idx);
    fine[pos] = 2.0 * spec[j];
  }
  fft::inverse_inplace(fine);
  ComplexField out(g);
  for (std::size_t j = 0; j < n; ++j) out.values[j] = fine[j + n / 2];
  return out;
}

}  // namespace

ComplexField scale_field(const ComplexField& u, double theta, int gamma, int m) {
  if (!is_dyadic(theta)) throw ConfigError("scaling factor must be a power of two");
  if (gamma < 1 || gamma > 3) throw ConfigError("gamma must be 1, 2 or 3");
  if (m < 3) throw ConfigError("degree m must be at least 3");
  int e = 0;
  std::frexp(theta, &e);
  int steps = e - 1;  // theta = 2^steps
  ComplexField out = u;
  for (; steps > 0; --steps) out = compress_by_two(out);
  for (; steps < 0; ++steps) out = stretch_by_two(out);
  const double amp = std::pow(theta, static_cast<double>(4 - gamma) / static_cast<double>(m - 1));
  return cplx{amp, 0.0} * out;
}

std::string describe(const Monomial& m) {
  std::ostringstream os;
  os << "(" << m.coeff.real() << (m.coeff.imag() < 0 ? "" : "+") << m.coeff.imag() << "i)";
  for (int k : m.u_orders) os << " D" << k << "u";
  for (int k : m.ubar_orders) os << " D" << k << "ubar";
  return os.str();
}

void to_json(nlohmann::json& j, const NonlinearitySpec& spec) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : spec.monomials())
    terms.push_back({{"coeff", {t.coeff.real(), t.coeff.imag()}}, {"u", t.u_orders}, {"ubar", t.ubar_orders}});
  j = {{"gamma", spec.gamma()}, {"monomials", terms}};
}

NonlinearitySpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("nonlinearity must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (key != "gamma" && key != "monomials") throw ConfigError("unknown nonlinearity key: " + key);
  if (!j.contains("gamma") || !j.contains("monomials")) throw ConfigError("nonlinearity needs gamma and monomials");
  std::vector<Monomial> terms;
  try {
    for (const auto& t : j.at("monomials")) {
      for (const auto& [key, value] : t.items())
        if (key != "coeff" && key != "u" && key != "ubar") throw ConfigError("unknown monomial key: " + key);
      const auto& c = t.at("coeff");
      if (!c.is_array() || c.size() != 2) throw ConfigError("monomial coeff must be [re, im]");
      terms.push_back({{c[0].get<double>(), c[1].get<double>()},
                       t.value("u", std::vector<int>{}),
                       t.value("ubar", std::vector<int>{})});
    }
    return NonlinearitySpec(j.at("gamma").get<int>(), std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed nonlinearity JSON: ") + e.what());
  }
}

}  // namespace fnls
