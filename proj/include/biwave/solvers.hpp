#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "biwave/chebyshev.hpp"
#include "biwave/core.hpp"
#include "biwave/field.hpp"
#include "biwave/params.hpp"
#include "biwave/quadrature.hpp"
#include "biwave/solution.hpp"
#include "biwave/spherical_means.hpp"

namespace biwave {

/// Numerical knobs shared by the closed-form solvers.
struct SolverConfig {
  int interval_order = 32;  // Gauss-Legendre order for every interval integral
  int sphere_level = 8;     // sphere/ball rule level (polar 4*level, azimuth 8*level)
  double h_rel = 1e-3;      // relative step of the derivative stencils
  double t_eps = 1e-6;      // below this the Taylor proxy replaces the formula
  int profile_nodes = 33;   // Chebyshev samples of each radial-profile cache

  void validate() const {
    if (interval_order < 1) fail(errc::bad_order, "interval_order");
    if (sphere_level < 1) fail(errc::bad_order, "sphere_level");
    if (!(h_rel > 0 && h_rel < 0.25)) fail(errc::bad_argument, "h_rel out of range");
    if (!(t_eps > 0 && t_eps < 1e-3)) fail(errc::bad_argument, "t_eps must be in (0, 1e-3)");
    if (profile_nodes < 4) fail(errc::bad_order, "profile_nodes");
  }
};

namespace detail {

// The formulas carry 1/t factors; below t_eps the evaluator switches to the
// Taylor polynomial forced by the initial conditions.
inline double taylor_proxy(const InitialData& data, const Point& x, double t) {
  return data.phi0.eval_unchecked(x) + t * data.phi1.eval_unchecked(x) +
         0.5 * t * t * data.phi2.eval_unchecked(x) +
         t * t * t / 6.0 * data.phi3.eval_unchecked(x);
}

// Radial profiles rho_i(s) = s^pow * Mean_s(phi_i)(x) for all four data
// fields, sampled in one sweep over the quadrature nodes and cached as
// Chebyshev interpolants on [0, s_max].
inline std::array<std::optional<ChebyshevInterpolant>, 4> build_profiles(
    const InitialData& data, const Point& x, const QuadratureRule& rule, double norm_factor,
    int pow, double s_max, int n_nodes) {
  std::array<std::optional<ChebyshevInterpolant>, 4> out;
  const auto radii = ChebyshevInterpolant::sample_abscissae(0.0, s_max, n_nodes);
  std::array<std::vector<double>, 4> samples;
  std::array<const ScalarField*, 4> fields{&data.phi0, &data.phi1, &data.phi2, &data.phi3};
  for (int i = 0; i < 4; ++i)
    if (!fields[static_cast<std::size_t>(i)]->is_zero())
      samples[static_cast<std::size_t>(i)].assign(radii.size(), 0.0);

  for (std::size_t j = 0; j < radii.size(); ++j) {
    const double s = radii[j];
    std::array<double, 4> acc{};
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const Point y = axpy(x, s, rule.nodes[q]);
      const double w = rule.weights[q];
      for (std::size_t i = 0; i < 4; ++i)
        if (!samples[i].empty()) acc[i] += w * fields[i]->eval_unchecked(y);
    }
    const double sp = std::pow(s, pow);
    for (std::size_t i = 0; i < 4; ++i)
      if (!samples[i].empty()) samples[i][j] = sp * norm_factor * acc[i];
  }
  for (std::size_t i = 0; i < 4; ++i)
    if (!samples[i].empty())
      out[i] = ChebyshevInterpolant::from_samples(0.0, s_max, samples[i]);
  return out;
}

// Shared evaluation core of the odd- and even-dimensional formulas. They
// differ only in the mean (sphere vs weighted ball), the radial power, the
// derivative count m and the double-factorial constant.
inline double mean_formula_value(const InitialData& data, const BiwaveParams& p,
                                 const SolverConfig& cfg, const QuadratureRule& rule, bool even,
                                 const Point& x, double t) {
  if (t < cfg.t_eps) return taylor_proxy(data, x, t);
  const int n = p.n;
  const int m = even ? (n - 2) / 2 : (n - 3) / 2;
  const int pow = even ? n - 1 : n - 2;
  const double dfact = double_factorial(even ? n - 1 : n - 2);
  const double norm_factor =
      even ? 2.0 / unit_sphere_area(n + 1) : 1.0 / unit_sphere_area(n);
  const double a = p.a, b = p.b;

  // domain must admit the outer time stencil and the nested radial stencils
  const double stretch = std::pow(1.0 + 2.0 * cfg.h_rel, m + 2);
  const double s_max = a * t * stretch * (1.0 + 1e-9);

  const auto prof = build_profiles(data, x, rule, norm_factor, pow, s_max, cfg.profile_nodes);
  auto w_of = [&](int i, double s) {
    return radial_derivative_power(*prof[static_cast<std::size_t>(i)], m, s, cfg.h_rel);
  };

  double acc = 0.0;
  if (prof[0]) {
    acc += (a * a / b) * time_derivative([&](double tau) { return w_of(0, b * tau); }, t, cfg.h_rel);
    acc -= (b * b / a) * time_derivative([&](double tau) { return w_of(0, a * tau); }, t, cfg.h_rel);
  }
  if (prof[1]) acc += (a * a / b) * w_of(1, b * t) - (b * b / a) * w_of(1, a * t);
  if (prof[2])
    acc += integrate_interval([&](double s) { return w_of(2, s); }, b * t, a * t,
                              cfg.interval_order);
  if (prof[3])
    acc += integrate_interval(
        [&](double nu) {
          return integrate_interval([&](double s) { return w_of(3, s); }, b * nu, a * nu,
                                    cfg.interval_order);
        },
        0.0, t, cfg.interval_order);
  return acc / (dfact * p.speed_gap());
}

}  // namespace detail

/// Closed-form solution on the line. Every integral goes through the
/// iterated Gauss-Legendre primitives.
inline SolutionEvaluator solve_1d(const InitialData& data, const BiwaveParams& p,
                                  const SolverConfig& cfg = {}) {
  cfg.validate();
  if (p.n != 1) fail(errc::bad_dimension, "solve_1d needs n = 1");
  if (data.dim() != 1) fail(errc::dimension_mismatch, "solve_1d data dimension");
  return SolutionEvaluator(
      p, SolutionEvaluator::Provenance::solver_1d, [data, p, cfg](const Point& xp, double t) {
        if (t < cfg.t_eps) return detail::taylor_proxy(data, xp, t);
        const double x = xp[0];
        const double a = p.a, b = p.b;
        const int ord = cfg.interval_order;
        auto f1 = [&](double y) { return data.phi1.eval_unchecked(Point{y}); };
        auto f2 = [&](double, double u) { return data.phi2.eval_unchecked(Point{u}); };
        auto f3 = [&](double, double, double w) { return data.phi3.eval_unchecked(Point{w}); };
        auto zero_fn = [](double) { return 0.0; };
        auto id = [](double y) { return y; };
        auto id2 = [](double, double tau) { return tau; };
        auto zero2 = [](double, double) { return 0.0; };

        double acc = 0.0;
        if (!data.phi1.is_zero()) {
          acc += -b * b * b * integrate_interval(f1, x - a * t, x + a * t, ord);
          acc += a * a * a * integrate_interval(f1, x - b * t, x + b * t, ord);
        }
        if (!data.phi2.is_zero()) {
          acc += -a * b * integrate_2(f2, x - a * t, x - b * t, zero_fn, id, ord);
          acc += a * b * integrate_2(f2, x + b * t, x + a * t, zero_fn, id, ord);
        }
        if (!data.phi3.is_zero()) {
          acc += b * integrate_3(f3, x - a * t, x + a * t, zero_fn, id, zero2, id2, ord);
          acc += -a * integrate_3(f3, x - b * t, x + b * t, zero_fn, id, zero2, id2, ord);
        }
        if (!data.phi0.is_zero()) {
          const double p0 = data.phi0.eval_unchecked(Point{x + a * t}) +
                            data.phi0.eval_unchecked(Point{x - a * t});
          const double q0 = data.phi0.eval_unchecked(Point{x + b * t}) +
                            data.phi0.eval_unchecked(Point{x - b * t});
          acc += -a * b * b * b * p0 + a * a * a * b * q0;
        }
        return acc / (2.0 * a * b * p.speed_gap());
      });
}

/// Odd dimensions n in {3, 5, 7}: iterated radial derivatives of sphere
/// means at radii bt and at.
inline SolutionEvaluator solve_odd(const InitialData& data, const BiwaveParams& p,
                                   const SolverConfig& cfg = {}) {
  cfg.validate();
  if (p.n % 2 == 0 || p.n < 3) fail(errc::bad_dimension, "solve_odd needs odd n >= 3");
  if (p.n > 7) fail(errc::unsupported_dimension, "solve_odd supports n <= 7");
  if (data.dim() != p.n) fail(errc::dimension_mismatch, "solve_odd data dimension");
  auto rule = detail::cached_sphere(p.n, cfg.sphere_level);
  return SolutionEvaluator(p, SolutionEvaluator::Provenance::solver_odd,
                           [data, p, cfg, rule](const Point& x, double t) {
                             return detail::mean_formula_value(data, p, cfg, *rule, false, x, t);
                           });
}

/// Even dimensions n in {2, 4, 6}: the same structure after descent from
/// n+1, with modified (weighted-ball) means.
inline SolutionEvaluator solve_even(const InitialData& data, const BiwaveParams& p,
                                    const SolverConfig& cfg = {}) {
  cfg.validate();
  if (p.n % 2 != 0 || p.n < 2) fail(errc::bad_dimension, "solve_even needs even n >= 2");
  if (p.n > 6) fail(errc::unsupported_dimension, "solve_even supports n <= 6");
  if (data.dim() != p.n) fail(errc::dimension_mismatch, "solve_even data dimension");
  auto rule = detail::cached_ball(p.n, cfg.sphere_level);
  return SolutionEvaluator(p, SolutionEvaluator::Provenance::solver_even,
                           [data, p, cfg, rule](const Point& x, double t) {
                             return detail::mean_formula_value(data, p, cfg, *rule, true, x, t);
                           });
}

/// Dispatch on parity.
inline SolutionEvaluator solve_homogeneous(const InitialData& data, const BiwaveParams& p,
                                           const SolverConfig& cfg = {}) {
  if (p.n == 1) return solve_1d(data, p, cfg);
  return p.n % 2 == 1 ? solve_odd(data, p, cfg) : solve_even(data, p, cfg);
}

/// Datum (phi0, phi1, a^2 lap(phi0), a^2 lap(phi1)): every mode then has
/// C3 = C4 = 0, so the solution rides on the fast speed alone and the n = 1
/// case collapses to the d'Alembert formula.
inline InitialData pure_speed_data(const BiwaveParams& p, const ScalarField& phi0,
                                   const ScalarField& phi1) {
  if (!phi0.is_trig() || !phi1.is_trig())
    fail(errc::bad_field_kind, "pure-speed projection needs trig-polynomial data");
  if (phi0.dim() != p.n || phi1.dim() != p.n)
    fail(errc::dimension_mismatch, "pure-speed projection data dimension");
  return make_initial_data(phi0, phi1, phi0.laplacian().scaled(p.a2()),
                           phi1.laplacian().scaled(p.a2()));
}

}  // namespace biwave
