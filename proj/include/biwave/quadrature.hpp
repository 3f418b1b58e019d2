#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "biwave/core.hpp"

namespace biwave {

/// Nodes and weights over one of three reference domains. Interval rules
/// live on [-1, 1]; sphere rules on S^{n-1}; ball rules carry the singular
/// weight 1/sqrt(1-|z|^2) folded into the node weights.
struct QuadratureRule {
  enum class Domain { interval, sphere_surface, weighted_ball };

  Domain domain = Domain::interval;
  int dim = 1;
  std::vector<Point> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  double weight_sum() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
  }
};

namespace detail {

// Legendre nodes by Newton iteration on P_n (standard gauleg construction).
inline void gauss_legendre_01(int order, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(order), 0.0);
  w.assign(static_cast<std::size_t>(order), 0.0);
  const int m = (order + 1) / 2;
  for (int i = 1; i <= m; ++i) {
    double z = std::cos(kPi * (i - 0.25) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = order * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i - 1)] = -z;
    x[static_cast<std::size_t>(order - i)] = z;
    w[static_cast<std::size_t>(i - 1)] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[static_cast<std::size_t>(order - i)] = w[static_cast<std::size_t>(i - 1)];
  }
}

struct RuleCache {
  std::mutex mu;
  std::map<std::pair<int, int>, std::shared_ptr<const QuadratureRule>> sphere, ball;
  std::map<int, std::shared_ptr<const QuadratureRule>> interval;
};

inline RuleCache& rule_cache() {
  static RuleCache cache;
  return cache;
}

}  // namespace detail

/// Gauss-Legendre rule on [-1, 1], exact through degree 2*order - 1.
inline QuadratureRule gauss_legendre(int order) {
  if (order < 1) fail(errc::bad_order, "gauss_legendre order " + std::to_string(order));
  auto& cache = detail::rule_cache();
  {
    std::scoped_lock lk(cache.mu);
    auto it = cache.interval.find(order);
    if (it != cache.interval.end()) return *it->second;
  }
  std::vector<double> x, w;
  detail::gauss_legendre_01(order, x, w);
  auto rule = std::make_shared<QuadratureRule>();
  rule->domain = QuadratureRule::Domain::interval;
  rule->dim = 1;
  rule->nodes.reserve(x.size());
  for (double xi : x) rule->nodes.push_back(Point{xi});
  rule->weights = std::move(w);
  std::scoped_lock lk(cache.mu);
  cache.interval.emplace(order, rule);
  return *rule;
}

namespace detail {

inline const std::shared_ptr<const QuadratureRule>& cached_interval(int order) {
  if (order < 1) fail(errc::bad_order, "interval order " + std::to_string(order));
  auto& cache = rule_cache();
  std::scoped_lock lk(cache.mu);
  auto it = cache.interval.find(order);
  if (it == cache.interval.end()) {
    std::vector<double> x, w;
    gauss_legendre_01(order, x, w);
    auto rule = std::make_shared<QuadratureRule>();
    rule->domain = QuadratureRule::Domain::interval;
    rule->dim = 1;
    for (double xi : x) rule->nodes.push_back(Point{xi});
    rule->weights = std::move(w);
    it = cache.interval.emplace(order, std::move(rule)).first;
  }
  return it->second;
}

}  // namespace detail

/// Affine-mapped Gauss-Legendre over [lo, hi]; lo == hi returns 0.
template <class F>
double integrate_interval(F&& f, double lo, double hi, int order) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) fail(errc::bad_bounds, "non-finite interval");
  if (lo == hi) return 0.0;
  const auto rule = detail::cached_interval(order);
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  double s = 0.0;
  for (std::size_t i = 0; i < rule->nodes.size(); ++i)
    s += rule->weights[i] * f(mid + half * rule->nodes[i][0]);
  return s * half;
}

/// Iterated two-level integral: outer y over [lo, hi], inner u over
/// [ilo(y), ihi(y)].
template <class F, class LoF, class HiF>
double integrate_2(F&& f, double lo, double hi, LoF&& ilo, HiF&& ihi, int order) {
  return integrate_interval(
      [&](double y) {
        return integrate_interval([&](double u) { return f(y, u); }, ilo(y), ihi(y), order);
      },
      lo, hi, order);
}

/// Three-level iterated integral with bounds depending on the outer variables.
template <class F, class Lo2, class Hi2, class Lo3, class Hi3>
double integrate_3(F&& f, double lo, double hi, Lo2&& lo2, Hi2&& hi2, Lo3&& lo3, Hi3&& hi3,
                   int order) {
  return integrate_interval(
      [&](double y) {
        return integrate_interval(
            [&](double tau) {
              return integrate_interval([&](double w) { return f(y, tau, w); }, lo3(y, tau),
                                        hi3(y, tau), order);
            },
            lo2(y), hi2(y), order);
      },
      lo, hi, order);
}

/// Bounds description for the std::function-facing nested integrator.
/// Inner bounds may depend on the outer variables, mirroring the iterated
/// integrals in the closed-form solutions.
struct NestedBounds {
  int depth = 1;
  double lo = 0, hi = 0;
  std::function<double(double)> lo2, hi2;
  std::function<double(double, double)> lo3, hi3;
};

inline double integrate_nested(const std::function<double(std::span<const double>)>& f,
                               const NestedBounds& b, int order) {
  if (b.depth < 1 || b.depth > 3) fail(errc::bad_bounds, "nested depth " + std::to_string(b.depth));
  if (b.depth >= 2 && (!b.lo2 || !b.hi2)) fail(errc::bad_bounds, "missing depth-2 bounds");
  if (b.depth == 3 && (!b.lo3 || !b.hi3)) fail(errc::bad_bounds, "missing depth-3 bounds");
  switch (b.depth) {
    case 1:
      return integrate_interval([&](double y) { return f(std::array{y}); }, b.lo, b.hi, order);
    case 2:
      return integrate_2([&](double y, double u) { return f(std::array{y, u}); }, b.lo, b.hi,
                         b.lo2, b.hi2, order);
    default:
      return integrate_3([&](double y, double t, double w) { return f(std::array{y, t, w}); },
                         b.lo, b.hi, b.lo2, b.hi2, b.lo3, b.hi3, order);
  }
}

namespace detail {

// Polar factor of the recursive product construction on S^{n-1}: nodes u in
// (-1, 1) and weights integrating f(u) (1-u^2)^{(n-3)/2} du. Integer powers
// fold into Gauss-Legendre weights; the half-integer case is Chebyshev
// (second kind), which carries sqrt(1-u^2) exactly.
inline void polar_rule(int n, int count, std::vector<double>& u, std::vector<double>& w) {
  const int twice_p = n - 3;  // weight (1-u^2)^{twice_p/2}
  u.clear();
  w.clear();
  if (twice_p % 2 == 0) {
    std::vector<double> x, gw;
    gauss_legendre_01(count, x, gw);
    for (int i = 0; i < count; ++i) {
      const double ui = x[static_cast<std::size_t>(i)];
      u.push_back(ui);
      w.push_back(gw[static_cast<std::size_t>(i)] * std::pow(1.0 - ui * ui, twice_p / 2));
    }
  } else {
    for (int j = 1; j <= count; ++j) {
      const double th = kPi * j / (count + 1);
      const double ui = std::cos(th);
      const double base = kPi / (count + 1) * std::sin(th) * std::sin(th);
      u.push_back(ui);
      w.push_back(base * std::pow(1.0 - ui * ui, (twice_p - 1) / 2));
    }
  }
}

inline QuadratureRule build_sphere_rule(int n, int level) {
  QuadratureRule rule;
  rule.domain = QuadratureRule::Domain::sphere_surface;
  rule.dim = n;
  if (n == 1) {
    rule.nodes = {Point{-1.0}, Point{1.0}};
    rule.weights = {1.0, 1.0};
    return rule;
  }
  if (n == 2) {
    const int m = 8 * level;
    for (int j = 0; j < m; ++j) {
      const double th = 2.0 * kPi * j / m;
      rule.nodes.push_back(Point{std::cos(th), std::sin(th)});
      rule.weights.push_back(2.0 * kPi / m);
    }
    return rule;
  }
  const QuadratureRule sub = build_sphere_rule(n - 1, level);
  std::vector<double> u, w;
  polar_rule(n, 4 * level, u, w);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double s = std::sqrt(std::max(0.0, 1.0 - u[i] * u[i]));
    for (std::size_t j = 0; j < sub.nodes.size(); ++j) {
      Point p(n);
      for (int d = 0; d < n - 1; ++d) p[d] = s * sub.nodes[j][d];
      p[n - 1] = u[i];
      rule.nodes.push_back(p);
      rule.weights.push_back(w[i] * sub.weights[j]);
    }
  }
  return rule;
}

inline QuadratureRule build_ball_rule(int n, int level) {
  // Radial substitution r = sin(alpha) turns the 1/sqrt(1-r^2) weight into
  // sin^{n-1}(alpha) d(alpha) on [0, pi/2]; the integrand becomes regular.
  QuadratureRule rule;
  rule.domain = QuadratureRule::Domain::weighted_ball;
  rule.dim = n;
  std::vector<double> ax, aw;
  // the sin^{n-1} factor needs a dozen radial nodes before the geometric
  // convergence regime kicks in
  gauss_legendre_01(std::max(12, 4 * level), ax, aw);
  const QuadratureRule shell = build_sphere_rule(n, level);
  for (std::size_t i = 0; i < ax.size(); ++i) {
    const double alpha = 0.25 * kPi * (ax[i] + 1.0);
    const double wa = 0.25 * kPi * aw[i];
    const double r = std::sin(alpha);
    const double radial_w = wa * std::pow(r, n - 1);
    for (std::size_t j = 0; j < shell.nodes.size(); ++j) {
      Point p(n);
      for (int d = 0; d < n; ++d) p[d] = r * shell.nodes[j][d];
      rule.nodes.push_back(p);
      rule.weights.push_back(radial_w * shell.weights[j]);
    }
  }
  return rule;
}

inline std::shared_ptr<const QuadratureRule> cached_sphere(int n, int level) {
  auto& cache = rule_cache();
  std::scoped_lock lk(cache.mu);
  auto key = std::make_pair(n, level);
  auto it = cache.sphere.find(key);
  if (it == cache.sphere.end())
    it = cache.sphere.emplace(key, std::make_shared<QuadratureRule>(build_sphere_rule(n, level)))
             .first;
  return it->second;
}

inline std::shared_ptr<const QuadratureRule> cached_ball(int n, int level) {
  auto& cache = rule_cache();
  std::scoped_lock lk(cache.mu);
  auto key = std::make_pair(n, level);
  auto it = cache.ball.find(key);
  if (it == cache.ball.end())
    it = cache.ball.emplace(key, std::make_shared<QuadratureRule>(build_ball_rule(n, level))).first;
  return it->second;
}

}  // namespace detail

/// Product rule on the unit sphere S^{n-1}. Weights sum to the sphere area
/// omega_n; node count grows as (4*level)^{n-2} * 8*level.
inline QuadratureRule sphere_surface_rule(int n, int level) {
  if (n < 2 || n > 7) fail(errc::unsupported_dimension, "sphere rule n = " + std::to_string(n));
  if (level < 1) fail(errc::bad_order, "sphere level " + std::to_string(level));
  return *detail::cached_sphere(n, level);
}

/// Rule over the unit ball with the weight 1/sqrt(1-|z|^2) folded in.
/// Weights sum to omega_{n+1}/2; nodes are strictly inside the ball.
inline QuadratureRule weighted_ball_rule(int n, int level) {
  if (n < 1 || n > 6) fail(errc::unsupported_dimension, "ball rule n = " + std::to_string(n));
  if (level < 1) fail(errc::bad_order, "ball level " + std::to_string(level));
  return *detail::cached_ball(n, level);
}

}  // namespace biwave
