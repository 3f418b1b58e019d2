#pragma once

#include <cmath>
#include <string>

#include "biwave/core.hpp"

namespace biwave {

/// Wave speeds of the two factors plus the spatial dimension.
/// Invariant: a^2 > b^2 > 0 (all formulas divide by a^2 - b^2) and n >= 1.
struct BiwaveParams {
  double a = 0;
  double b = 0;
  int n = 0;

  double a2() const { return a * a; }
  double b2() const { return b * b; }
  double speed_gap() const { return a * a - b * b; }
};

inline BiwaveParams make_params(double a, double b, int n) {
  if (!std::isfinite(a) || !std::isfinite(b))
    fail(errc::bad_argument, "speeds must be finite");
  if (b <= 0.0) fail(errc::nonpositive_speed, "b = " + std::to_string(b));
  if (a <= 0.0) fail(errc::nonpositive_speed, "a = " + std::to_string(a));
  if (a * a == b * b) fail(errc::degenerate_speeds, "a^2 = b^2");
  if (a * a < b * b) fail(errc::speed_ordering, "a^2 < b^2");
  if (n < 1) fail(errc::bad_dimension, "n = " + std::to_string(n));
  if (n > kMaxDim - 1) fail(errc::unsupported_dimension, "n = " + std::to_string(n));
  return BiwaveParams{a, b, n};
}

}  // namespace biwave
