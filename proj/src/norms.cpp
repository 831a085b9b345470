#include "fnls/norms.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fnls/error.hpp"
#include "fnls/spectral.hpp"

namespace fnls {

MixedNormAccumulator::MixedNormAccumulator(Outer outer, double q_outer, double r_inner, std::size_t n, double dx)
    : outer_(outer), q_(q_outer), r_(r_inner), dx_(dx) {
  if (!(q_ >= 1.0) || !(r_ >= 1.0)) throw ConfigError("mixed norm exponents must be >= 1");
  if (outer_ == Outer::space) space_acc_.assign(n, 0.0);
}

void MixedNormAccumulator::add(std::span<const cplx> values, double time_weight) {
  if (outer_ == Outer::time) {
    double inner = 0.0;
    if (std::isinf(r_)) {
      for (const auto& v : values) inner = std::max(inner, std::abs(v));
    } else {
      for (const auto& v : values) inner += std::pow(std::abs(v), r_);
      inner = std::pow(inner * dx_, 1.0 / r_);
    }
    if (std::isinf(q_)) {
      time_acc_ = std::max(time_acc_, inner);
    } else {
      time_acc_ += time_weight * std::pow(inner, q_);
    }
    return;
  }
  if (values.size() != space_acc_.size()) throw ConfigError("snapshot size does not match accumulator");
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double a = std::abs(values[j]);
    if (std::isinf(r_)) {
      space_acc_[j] = std::max(space_acc_[j], a);
    } else if (r_ == 2.0) {
      space_acc_[j] += time_weight * a * a;
    } else {
      space_acc_[j] += time_weight * std::pow(a, r_);
    }
  }
}

double MixedNormAccumulator::result() const {
  if (outer_ == Outer::time) return std::isinf(q_) ? time_acc_ : std::pow(time_acc_, 1.0 / q_);
  double acc = 0.0;
  for (double s : space_acc_) {
    const double inner = std::isinf(r_) ? s : std::pow(s, 1.0 / r_);
    if (std::isinf(q_)) {
      acc = std::max(acc, inner);
    } else {
      acc += std::pow(inner, q_);
    }
  }
  return std::isinf(q_) ? acc : std::pow(acc * dx_, 1.0 / q_);
}

std::vector<double> trapezoid_weights(std::size_t count, double dt) {
  std::vector<double> w(count, dt);
  if (count == 1) {
    w[0] = 0.0;
    return w;
  }
  w.front() = 0.5 * dt;
  w.back() = 0.5 * dt;
  return w;
}

double mixed_norm(const SpaceTimeTrace& trace, Outer outer, double q_outer, double r_inner) {
  MixedNormAccumulator acc(outer, q_outer, r_inner, trace.grid().n(), trace.grid().dx());
  const auto w = trapezoid_weights(trace.size(), trace.dt());
  for (std::size_t j = 0; j < trace.size(); ++j) acc.add(trace[j].values, w[j]);
  return acc.result();
}

double xn_weighted_total(const XnBreakdown& b) {
  return b.l_inf_t_l2x + std::sqrt(b.N) * b.l4t_linfx + std::pow(b.N, -(1.0 + b.eps)) * b.l2x_linft +
         std::pow(b.N, -0.25) * b.l4x_linft + std::pow(b.N, 1.5) * b.linfx_l2t;
}

XnBreakdown xn_components(const SpaceTimeTrace& trace, double N, double eps) {
  if (!(eps > 0.0)) throw ConfigError("epsilon must be positive");
  if (!is_dyadic(N)) throw ConfigError("X_N scale must be dyadic");
  const auto n = trace.grid().n();
  const double dx = trace.grid().dx();
  MixedNormAccumulator a(Outer::time, kInf, 2.0, n, dx);
  MixedNormAccumulator b(Outer::time, 4.0, kInf, n, dx);
  MixedNormAccumulator c(Outer::space, 2.0, kInf, n, dx);
  MixedNormAccumulator d(Outer::space, 4.0, kInf, n, dx);
  MixedNormAccumulator e(Outer::space, kInf, 2.0, n, dx);
  const auto w = trapezoid_weights(trace.size(), trace.dt());
  for (std::size_t j = 0; j < trace.size(); ++j) {
    for (auto* acc : {&a, &b, &c, &d, &e}) acc->add(trace[j].values, w[j]);
  }
  XnBreakdown out{a.result(), b.result(), c.result(), d.result(), e.result(), 0.0, N, eps};
  out.weighted_total = xn_weighted_total(out);
  return out;
}

XnBreakdown xn_norm(const SpaceTimeTrace& trace, double N, double eps) {
  double in = 0.0, total = 0.0;
  for (const auto& f : trace.fields()) {
    const double m = std::pow(l2_norm(f), 2);
    total += m;
    in += m * spectral_mass_fraction(f, 0.5 * N, 2.0 * N);
  }
  if (total > 0.0 && in < 0.99 * total)
    throw ConfigError("trace is not localized to the shell N=" + std::to_string(N) + " (fraction " +
                      std::to_string(in / total) + ")");
  return xn_components(trace, N, eps);
}

double xs_norm(std::span<const ShellTrace> shells, double s, double eps) {
  std::set<double> seen;
  bool have_low = false;
  double low = 0.0, high = 0.0;
  for (const auto& sh : shells) {
    if (sh.low) {
      if (have_low) throw ConfigError("more than one low-frequency block");
      have_low = true;
      low = xn_components(sh.trace, 1.0, eps).weighted_total;
      continue;
    }
    if (!seen.insert(sh.N).second) throw ConfigError("overlapping shell set: N repeated");
    const double v = xn_norm(sh.trace, sh.N, eps).weighted_total;
    high += std::pow(sh.N, 2.0 * s) * v * v;
  }
  if (have_low && !seen.empty() && *seen.begin() <= 1.0)
    throw ConfigError("overlapping shell set: shells N <= 1 are inside the low block");
  return low + std::sqrt(high);
}

}  // namespace fnls
