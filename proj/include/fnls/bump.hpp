#pragma once

namespace fnls {

enum class BumpKind { smooth, sharp };

// Even cutoff with phi = 1 on |r| <= 1 and phi = 0 on |r| >= 2.
// The smooth kind is a C-infinity bridge built from exp(-1/s); the sharp kind
// jumps at |r| = sqrt(2) and is kept for cross-checks.
struct BumpProfile {
  BumpKind kind = BumpKind::smooth;

  double phi(double r) const;
  // Shell weight psi_N(r) = phi(r/N) - phi(2r/N).
  double psi(double N, double r) const { return phi(r / N) - phi(2.0 * r / N); }
};

}  // namespace fnls
