#pragma once

#include <optional>
#include <string>

#include "fnls/bilinear.hpp"
#include "fnls/norms.hpp"

namespace fnls {

enum class EstimateKind { strichartz, kato, kenig_ruiz, maximal, bilinear, refined_bilinear };

std::string to_string(EstimateKind k);
EstimateKind estimate_kind_from_string(const std::string& s);

struct EstimateParams {
  double N = 1.0;             // shell for the linear estimates
  double N1 = 1.0;            // high shell for the bilinear estimates
  double N2 = 1.0;            // low shell for the bilinear estimates
  double L = 1.0;             // pair-separation scale for the refined estimate
  PairSign sign = PairSign::minus;
  double q = 4.0;             // Strichartz time exponent
  double r = kInf;            // Strichartz space exponent
  double eps = 0.01;          // maximal-function weight <d>^{-(1+eps)}
  double T = 0.9;             // maximal-function horizon
  double sample_factor = 0.0; // time samples per half period of the fastest phase; 0 picks the kind default
  double window_margin = 0.0; // fraction of the wrap-free window used; 0 picks the kind default
  bool enforce_separation = true;
  bool check_refinement = false;
};

struct EstimateResult {
  double ratio = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double t_begin = 0.0;
  double t_end = 0.0;
  std::size_t samples = 0;
  double boundary_ratio = 0.0;       // largest data amplitude at the domain edge relative to peak
  double refinement_delta = -1.0;    // relative change under doubled time sampling; -1 when not run
};

// Measured left side over the weighted right side.  Line behaviour is emulated
// on the torus by restricting time to a window in which no part of the evolved
// data can travel across the periodic boundary (relative motion for bilinear kinds).
// Linear kinds use `first`; bilinear kinds use `first` (high shell) and `second`.
EstimateResult estimate_ratio(EstimateKind kind, const EstimateParams& params, const ComplexField& first,
                              const std::optional<ComplexField>& second = std::nullopt);

// Radius of the smallest centred interval outside which |f| stays below tol * peak.
double support_radius(const ComplexField& f, double tol = 1e-10);

}  // namespace fnls
