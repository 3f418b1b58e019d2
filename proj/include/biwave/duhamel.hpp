#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "biwave/core.hpp"
#include "biwave/field.hpp"
#include "biwave/params.hpp"
#include "biwave/quadrature.hpp"
#include "biwave/solution.hpp"
#include "biwave/solvers.hpp"

namespace biwave {

struct DuhamelConfig {
  /// Gauss-Legendre order of the outer tau integral; 0 picks
  /// max(16, ceil(8 t)) per evaluation.
  int tau_order = 0;
  SolverConfig inner;

  void validate() const {
    if (tau_order != 0 && tau_order < 4) fail(errc::bad_order, "tau_order must be >= 4");
    inner.validate();
  }
};

/// Nonhomogeneous problem: u = (homogeneous solution of the data) + v with
/// v(x, t) = integral over tau of the homogeneous solution restarted at tau
/// with data (0, 0, 0, f(., tau)) and evaluated at elapsed time t - tau.
/// The homogeneous problem is autonomous, so restart-at-tau is a time shift.
inline SolutionEvaluator solve_nonhomogeneous(const InitialData& data, const ForcingField& f,
                                              const BiwaveParams& p,
                                              const DuhamelConfig& cfg = {}) {
  cfg.validate();
  if (data.dim() != p.n || f.dim() != p.n)
    fail(errc::dimension_mismatch, "nonhomogeneous solve dimension");
  const SolutionEvaluator tilde = solve_homogeneous(data, p, cfg.inner);
  return SolutionEvaluator(
      p, SolutionEvaluator::Provenance::duhamel, [tilde, f, p, cfg](const Point& x, double t) {
        double u = tilde(x, t);
        if (f.is_zero() || t <= 0.0) return u;
        const int order =
            cfg.tau_order > 0 ? cfg.tau_order : std::max(16, static_cast<int>(std::ceil(8.0 * t)));
        const InitialData impulse_shape = InitialData::zero(p.n);
        u += integrate_interval(
            [&](double tau) {
              InitialData impulse = impulse_shape;
              impulse.phi3 = f.at_time(tau);
              const SolutionEvaluator omega = solve_homogeneous(impulse, p, cfg.inner);
              return omega(x, t - tau);
            },
            0.0, t, order);
        return u;
      });
}

}  // namespace biwave
