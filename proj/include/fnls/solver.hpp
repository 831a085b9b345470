#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "fnls/nonlinearity.hpp"
#include "fnls/propagator.hpp"

namespace fnls {

struct SolveConfig {
  LinearSymbol sym;
  NonlinearitySpec spec;
  double T;
  double dt;
  int record_every = 1;

  void validate() const;
  // Number of integrator steps; T must be an integer multiple of dt.
  std::size_t steps() const;
};

// Integrating-factor RK4: the linear symbol is exact, only G is stepped.
// Throws NumericError when the L2 norm grows past 1e6 times its initial value.
SpaceTimeTrace simulate(const ComplexField& u0, const SolveConfig& cfg);

// Heuristic step bound 0.5 / (max|xi|^gamma * m * max|u0|^(m-1)).
double suggested_dt(const NonlinearitySpec& spec, const ComplexField& u0);

struct PicardReport {
  std::vector<SpaceTimeTrace> iterates;
  std::vector<double> diff_norms;  // sup over snapshots of the L2 distance between consecutive iterates
  std::vector<double> ratios;
  bool diverged = false;
};

// Iterates u <- e^{itL}u0 - i I[G(u)] on the snapshot times of `cfg`
// (spacing dt * record_every), starting from the free evolution.
PicardReport picard_sequence(const ComplexField& u0, const SolveConfig& cfg, int kmax);

struct Invariants {
  double phi0;
  double phi1;
  cplx phi2;
};

Invariants invariants(const ComplexField& u);

// Max over interior snapshots of |i u_t + (nu d^4 + beta d^2) u - G(u)|_{L2}, u_t by
// centered fourth-order differences.
double pde_residual(const SpaceTimeTrace& trace, const SolveConfig& cfg);

// sup over snapshots of |a_j - b_j|_{L2}; traces must share times.
double sup_time_l2_distance(const SpaceTimeTrace& a, const SpaceTimeTrace& b);

// Binary trace format, little-endian: u64 n, f64 period, f64 t0, f64 dt, u64 count,
// then count * n complex samples as (re, im) f64 pairs, snapshot-major.
void write_trace(const std::string& path, const SpaceTimeTrace& trace);
SpaceTimeTrace read_trace(const std::string& path);

void to_json(nlohmann::json& j, const SolveConfig& cfg);
SolveConfig solve_config_from_json(const nlohmann::json& j);

}  // namespace fnls
