#pragma once

#include <limits>
#include <span>
#include <vector>

#include "fnls/propagator.hpp"

namespace fnls {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Which variable carries the outer norm: L^q_t L^r_x (time) or L^q_x L^r_t (space).
enum class Outer { time, space };

// Streaming evaluation of a mixed Lebesgue norm: snapshots are fed one at a time
// with their time-quadrature weight, so long traces never need to be stored.
class MixedNormAccumulator {
 public:
  MixedNormAccumulator(Outer outer, double q_outer, double r_inner, std::size_t n, double dx);

  void add(std::span<const cplx> values, double time_weight);
  double result() const;

 private:
  Outer outer_;
  double q_;
  double r_;
  double dx_;
  double time_acc_ = 0.0;
  std::vector<double> space_acc_;
};

// Trapezoid weights dt * (1/2, 1, ..., 1, 1/2).
std::vector<double> trapezoid_weights(std::size_t count, double dt);

double mixed_norm(const SpaceTimeTrace& trace, Outer outer, double q_outer, double r_inner);

struct XnBreakdown {
  double l_inf_t_l2x = 0.0;
  double l4t_linfx = 0.0;
  double l2x_linft = 0.0;
  double l4x_linft = 0.0;
  double linfx_l2t = 0.0;
  double weighted_total = 0.0;
  double N = 1.0;
  double eps = 0.01;
};

double xn_weighted_total(const XnBreakdown& b);

// Requires at least 99% of the spectral mass inside the shell support [N/2, 2N].
XnBreakdown xn_norm(const SpaceTimeTrace& trace, double N, double eps = 0.01);
// Same components without the localization check (used for the low-frequency block).
XnBreakdown xn_components(const SpaceTimeTrace& trace, double N, double eps = 0.01);

struct ShellTrace {
  double N;       // dyadic scale; ignored for the low block
  bool low;       // true for P_{<=1} u, measured in X_1
  SpaceTimeTrace trace;
};

// |P_{<=1} u|_{X_1} + (sum_N N^{2s} |P_N u|_{X_N}^2)^{1/2}
double xs_norm(std::span<const ShellTrace> shells, double s, double eps = 0.01);

}  // namespace fnls
