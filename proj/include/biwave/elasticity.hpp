#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "biwave/core.hpp"
#include "biwave/field.hpp"
#include "biwave/params.hpp"
#include "biwave/solution.hpp"
#include "biwave/verification.hpp"

namespace biwave {

/// Isotropic Lame moduli plus density. lambda + mu > 0 keeps the pressure
/// speed strictly above the shear speed.
struct ElasticParams {
  double lambda = 0;
  double mu = 0;
  double rho = 0;
};

inline ElasticParams make_elastic_params(double lambda, double mu, double rho) {
  if (!(mu > 0)) fail(errc::bad_argument, "mu must be positive");
  if (!(rho > 0)) fail(errc::bad_argument, "rho must be positive");
  if (!(lambda + mu > 0)) fail(errc::speed_ordering, "lambda + mu <= 0 breaks a^2 > b^2");
  return ElasticParams{lambda, mu, rho};
}

/// a = sqrt((lambda + 2 mu)/rho), b = sqrt(mu/rho).
inline BiwaveParams lame_to_speeds(const ElasticParams& ep, int n = 3) {
  make_elastic_params(ep.lambda, ep.mu, ep.rho);  // re-validate
  return make_params(std::sqrt((ep.lambda + 2.0 * ep.mu) / ep.rho), std::sqrt(ep.mu / ep.rho), n);
}

namespace detail {

class QuantizedCache {
 public:
  explicit QuantizedCache(double quantum) : quantum_(quantum) {}

  template <class F>
  double get_or_compute(const Point& x, double t, F&& compute) {
    std::array<std::int64_t, kMaxDim + 1> key{};
    for (int i = 0; i < x.dim(); ++i) key[static_cast<std::size_t>(i)] = quantize(x[i]);
    key[kMaxDim] = quantize(t);
    {
      std::scoped_lock lk(mu_);
      auto it = map_.find(key);
      if (it != map_.end()) return it->second;
    }
    const double v = compute();
    std::scoped_lock lk(mu_);
    map_.emplace(key, v);
    return v;
  }

 private:
  std::int64_t quantize(double v) const { return std::llround(v / quantum_); }

  struct Hash {
    std::size_t operator()(const std::array<std::int64_t, kMaxDim + 1>& k) const {
      std::size_t h = 1469598103934665603ULL;
      for (auto v : k) {
        h ^= static_cast<std::size_t>(v);
        h *= 1099511628211ULL;
      }
      return h;
    }
  };

  double quantum_;
  std::mutex mu_;
  std::unordered_map<std::array<std::int64_t, kMaxDim + 1>, double, Hash> map_;
};

}  // namespace detail

/// Time-dependent vector field with one evaluator per component.
class VectorFieldEvaluator {
 public:
  using Component = std::function<double(const Point&, double)>;

  VectorFieldEvaluator(int dim, std::vector<Component> components)
      : dim_(dim), comps_(std::make_shared<std::vector<Component>>(std::move(components))) {
    if (static_cast<int>(comps_->size()) != dim)
      fail(errc::dimension_mismatch, "component count must equal the dimension");
  }

  static VectorFieldEvaluator zero(int dim) {
    std::vector<Component> c(static_cast<std::size_t>(dim),
                             [](const Point&, double) { return 0.0; });
    return VectorFieldEvaluator(dim, std::move(c));
  }

  static VectorFieldEvaluator from_solutions(std::span<const SolutionEvaluator> sols) {
    if (sols.empty()) fail(errc::bad_argument, "no components");
    const int dim = sols[0].dim();
    std::vector<Component> c;
    for (const auto& s : sols) {
      if (s.dim() != dim) fail(errc::dimension_mismatch, "mixed component dimensions");
      c.emplace_back([s](const Point& x, double t) { return s(x, t); });
    }
    return VectorFieldEvaluator(dim, std::move(c));
  }

  int dim() const { return dim_; }
  double operator()(int comp, const Point& x, double t) const {
    return (*comps_)[static_cast<std::size_t>(comp)](x, t);
  }

  /// Wrap every component in a coordinate-quantized memo table. Stencil
  /// stages stacked on top of each other revisit lattice points; quantum
  /// should be well below the stencil step.
  VectorFieldEvaluator memoized(double quantum) const {
    std::vector<Component> wrapped;
    for (int i = 0; i < dim_; ++i) {
      auto inner = (*comps_)[static_cast<std::size_t>(i)];
      auto cache = std::make_shared<detail::QuantizedCache>(quantum);
      wrapped.emplace_back([inner, cache](const Point& x, double t) {
        return cache->get_or_compute(x, t, [&] { return inner(x, t); });
      });
    }
    return VectorFieldEvaluator(dim_, std::move(wrapped));
  }

 private:
  int dim_;
  std::shared_ptr<std::vector<Component>> comps_;
};

namespace detail {

// d2/dq2 along one coordinate (axis >= 0) or along t (axis == -1).
inline double second_derivative(const VectorFieldEvaluator& w, int comp, const Point& x, double t,
                                int axis, double h) {
  double acc = 0.0;
  for (int j = -2; j <= 2; ++j) {
    Point xs = x;
    double ts = t;
    if (axis >= 0)
      xs[axis] += j * h;
    else
      ts += j * h;
    acc += kD2[static_cast<std::size_t>(j + 2)] * w(comp, xs, ts);
  }
  return acc / (h * h);
}

// Mixed second partial d2/dxi dxj (i != j) by composing two first-derivative
// stencils.
inline double mixed_derivative(const VectorFieldEvaluator& w, int comp, const Point& x, double t,
                               int ai, int aj, double h) {
  static constexpr std::array<double, 5> kD1{1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
  double acc = 0.0;
  for (int j1 = -2; j1 <= 2; ++j1) {
    if (kD1[static_cast<std::size_t>(j1 + 2)] == 0.0) continue;
    for (int j2 = -2; j2 <= 2; ++j2) {
      if (kD1[static_cast<std::size_t>(j2 + 2)] == 0.0) continue;
      Point xs = x;
      xs[ai] += j1 * h;
      xs[aj] += j2 * h;
      acc += kD1[static_cast<std::size_t>(j1 + 2)] * kD1[static_cast<std::size_t>(j2 + 2)] *
             w(comp, xs, t);
    }
  }
  return acc / (h * h);
}

inline double laplacian(const VectorFieldEvaluator& w, int comp, const Point& x, double t,
                        double h) {
  double acc = 0.0;
  for (int axis = 0; axis < w.dim(); ++axis) acc += second_derivative(w, comp, x, t, axis, h);
  return acc;
}

// (grad div w)_i = sum_j d2 w_j / dxi dxj
inline double grad_div(const VectorFieldEvaluator& w, int i, const Point& x, double t, double h) {
  double acc = 0.0;
  for (int j = 0; j < w.dim(); ++j)
    acc += i == j ? second_derivative(w, j, x, t, i, h) : mixed_derivative(w, j, x, t, i, j, h);
  return acc;
}

}  // namespace detail

/// Displacement reconstruction u = (d2/dt2 - a^2 lap) w + (a^2 - b^2) grad div w,
/// all operators by 4th-order central differences with step h.
inline VectorFieldEvaluator cks_displacement(const VectorFieldEvaluator& w,
                                             const BiwaveParams& p, double h) {
  if (!(h > 0)) fail(errc::bad_argument, "cks step must be positive");
  if (w.dim() != p.n) fail(errc::dimension_mismatch, "cks potential dimension");
  std::vector<VectorFieldEvaluator::Component> comps;
  for (int i = 0; i < p.n; ++i) {
    comps.emplace_back([w, p, h, i](const Point& x, double t) {
      const double wtt = detail::second_derivative(w, i, x, t, -1, h);
      const double lap = detail::laplacian(w, i, x, t, h);
      const double gd = detail::grad_div(w, i, x, t, h);
      return wtt - p.a2() * lap + p.speed_gap() * gd;
    });
  }
  return VectorFieldEvaluator(p.n, std::move(comps));
}

/// Navier operator defect (d2/dt2 - b^2 lap) u - (a^2 - b^2) grad div u - f/rho,
/// reported component-wise over the probes. Null forcing means f = 0.
inline ResidualReport navier_residual(const VectorFieldEvaluator& u,
                                      const std::vector<ForcingField>* f, const ElasticParams& ep,
                                      std::span<const std::pair<Point, double>> probes, double h) {
  if (!(h > 0)) fail(errc::bad_argument, "residual step must be positive");
  const BiwaveParams p = lame_to_speeds(ep, u.dim());
  if (f && static_cast<int>(f->size()) != u.dim())
    fail(errc::dimension_mismatch, "forcing component count");
  ResidualReport rep;
  for (const auto& [x, t] : probes) {
    if (t < 2.0 * h) fail(errc::stencil_out_of_domain, "navier probe too close to t = 0");
    for (int i = 0; i < u.dim(); ++i) {
      const double utt = detail::second_derivative(u, i, x, t, -1, h);
      const double lap = detail::laplacian(u, i, x, t, h);
      const double gd = detail::grad_div(u, i, x, t, h);
      double fi = 0.0;
      if (f) fi = (*f)[static_cast<std::size_t>(i)](x, t);
      const double res = utt - p.b2() * lap - p.speed_gap() * gd - fi / ep.rho;
      rep.max_abs = std::max(rep.max_abs, std::abs(res));
      rep.scale = std::max(rep.scale, std::abs(utt));
    }
    ++rep.probes;
  }
  rep.finish();
  return rep;
}

}  // namespace biwave
