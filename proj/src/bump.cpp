#include "fnls/bump.hpp"

#include <cmath>

namespace fnls {
namespace {

double flat(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

}  // namespace

double BumpProfile::phi(double r) const {
  const double a = std::abs(r);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  if (kind == BumpKind::sharp) return a < std::sqrt(2.0) ? 1.0 : 0.0;
  const double up = flat(2.0 - a);
  return up / (up + flat(a - 1.0));
}

}  // namespace fnls
