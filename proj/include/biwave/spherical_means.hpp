#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <type_traits>

#include "biwave/core.hpp"
#include "biwave/field.hpp"
#include "biwave/quadrature.hpp"

namespace biwave {

/// Average of phi over the sphere of radius R centered at x, computed with a
/// sphere-surface rule in the field's dimension. R = 0 collapses to phi(x).
inline double spherical_mean(const ScalarField& phi, const Point& x, double R,
                             const QuadratureRule& rule) {
  if (R < 0) fail(errc::bad_argument, "spherical mean radius " + std::to_string(R));
  if (rule.domain != QuadratureRule::Domain::sphere_surface || rule.dim != phi.dim())
    fail(errc::dimension_mismatch, "spherical mean needs a sphere rule of the field dimension");
  if (x.dim() != phi.dim()) fail(errc::dimension_mismatch, "spherical mean point dimension");
  if (R == 0.0) return phi.eval_unchecked(x);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * phi.eval_unchecked(axpy(x, R, rule.nodes[i]));
  return s / unit_sphere_area(phi.dim());
}

/// Weighted average of phi over the ball of radius t centered at x:
/// (2/omega_{n+1}) * integral of phi(x + t z) / sqrt(1 - |z|^2) over |z| < 1.
inline double modified_spherical_mean(const ScalarField& phi, const Point& x, double t,
                                      const QuadratureRule& rule) {
  if (t < 0) fail(errc::bad_argument, "modified mean scale " + std::to_string(t));
  if (rule.domain != QuadratureRule::Domain::weighted_ball || rule.dim != phi.dim())
    fail(errc::dimension_mismatch, "modified mean needs a ball rule of the field dimension");
  if (x.dim() != phi.dim()) fail(errc::dimension_mismatch, "modified mean point dimension");
  if (t == 0.0) return phi.eval_unchecked(x);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * phi.eval_unchecked(axpy(x, t, rule.nodes[i]));
  return s * 2.0 / unit_sphere_area(phi.dim() + 1);
}

/// Radius -> value function, typically s -> s^{n-2} M_s(phi)(x) at fixed x.
struct RadialProfile {
  std::function<double(double)> eval;
  double s_lo = 0.0;
  double s_hi = std::numeric_limits<double>::infinity();
};

namespace detail {

// 4th-order central first derivative.
template <class G>
double d1_central4(G&& g, double s, double h) {
  return (-g(s + 2 * h) + 8.0 * g(s + h) - 8.0 * g(s - h) + g(s - 2 * h)) / (12.0 * h);
}

// One Richardson level on top of the 4th-order stencil (leading error h^4
// cancels, leaving h^6).
template <class G>
double d1_richardson(G&& g, double s, double h) {
  const double coarse = d1_central4(g, s, h);
  const double fine = d1_central4(g, s, 0.5 * h);
  return (16.0 * fine - coarse) / 15.0;
}

template <class G>
double radial_derivative_power_impl(G&& g, int m, double s, double h_rel) {
  if (m == 0) return g(s);
  auto inner = [&](double r) { return radial_derivative_power_impl(g, m - 1, r, h_rel); };
  return d1_richardson(inner, s, h_rel * s) / s;
}

}  // namespace detail

/// ((1/s) d/ds)^m g at s, by m-fold composition of the Richardson-extrapolated
/// central stencil with step h = h_rel * s.
template <class G>
  requires std::is_invocable_r_v<double, G, double>
double radial_derivative_power(G&& g, int m, double s, double h_rel) {
  if (m < 0) fail(errc::bad_argument, "derivative power " + std::to_string(m));
  if (m > 0 && !(s > 0)) fail(errc::bad_argument, "radial derivative at s <= 0");
  if (m > 0 && !(h_rel > 0 && h_rel < 0.25)) fail(errc::bad_argument, "h_rel out of range");
  return detail::radial_derivative_power_impl(g, m, s, h_rel);
}

inline double radial_derivative_power(const RadialProfile& g, int m, double s, double h_rel) {
  if (!g.eval) fail(errc::bad_argument, "radial profile has no evaluator");
  if (m > 0) {
    // the composed stencil reaches out to s*(1 +/- 2 h_rel)^m
    const double stretch = std::pow(1.0 + 2.0 * h_rel, m);
    if (s / stretch < g.s_lo || s * stretch > g.s_hi)
      fail(errc::stencil_out_of_domain, "radial stencil leaves [s_lo, s_hi]");
  }
  return radial_derivative_power(g.eval, m, s, h_rel);
}

/// d/dt g at t > 0, central stencil with step h_rel * t plus one Richardson
/// level. Throws on non-finite samples.
template <class G>
double time_derivative(G&& g, double t, double h_rel) {
  if (!(t > 0)) fail(errc::bad_argument, "time derivative at t <= 0");
  if (!(h_rel > 0 && h_rel < 0.25)) fail(errc::bad_argument, "h_rel out of range");
  auto checked = [&](double tau) {
    const double v = g(tau);
    if (!std::isfinite(v)) fail(errc::bad_argument, "non-finite sample in time derivative");
    return v;
  };
  return detail::d1_richardson(checked, t, h_rel * t);
}

}  // namespace biwave
