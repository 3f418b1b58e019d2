#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "biwave/core.hpp"
#include "biwave/field.hpp"
#include "biwave/grid.hpp"
#include "biwave/solution.hpp"

namespace biwave {

/// Discrete residual summary. The scale is the largest |u_tttt| seen over
/// the probes, so `relative` compares the operator defect against the size
/// of its leading term.
struct ResidualReport {
  double max_abs = 0;
  double scale = 0;
  double relative = 0;
  int probes = 0;

  static constexpr double kScaleFloor = 1e-14;

  void finish() { relative = max_abs / std::max(scale, kScaleFloor); }
};

namespace detail {

// 4th-order central stencils.
inline constexpr std::array<double, 5> kD2{-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
inline constexpr std::array<double, 7> kD4{-1.0 / 6, 2.0, -13.0 / 2, 28.0 / 3,
                                           -13.0 / 2, 2.0, -1.0 / 6};

// Sampled evaluations keyed by integer stencil offsets; nested operators
// revisit the same lattice points many times. Values are returned relative
// to the probe center: every stencil here has zero weight sum, and the
// subtraction makes constants cancel exactly instead of to O(eps/h^4).
class StencilSampler {
 public:
  StencilSampler(const SolutionEvaluator& u, const Point& x0, double t0, double h)
      : u_(u), x0_(x0), t0_(t0), h_(h), center_(u(x0, t0)) {}

  // offsets: spatial steps per axis plus the time step in the last slot
  double operator()(std::span<const int> dx, int dt) {
    std::array<std::int16_t, kMaxDim + 1> key{};
    bool centered = dt == 0;
    for (std::size_t i = 0; i < dx.size(); ++i) {
      key[i] = static_cast<std::int16_t>(dx[i]);
      centered = centered && dx[i] == 0;
    }
    if (centered) return 0.0;
    key[kMaxDim] = static_cast<std::int16_t>(dt);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Point x = x0_;
    for (std::size_t i = 0; i < dx.size(); ++i) x[static_cast<int>(i)] += h_ * dx[i];
    const double v = u_(x, t0_ + h_ * dt) - center_;
    cache_.emplace(key, v);
    return v;
  }

 private:
  const SolutionEvaluator& u_;
  Point x0_;
  double t0_;
  double h_;
  double center_;
  std::map<std::array<std::int16_t, kMaxDim + 1>, double> cache_;
};

// Laplacian at a lattice offset, composed from per-axis D2 stencils.
inline double lap_at(StencilSampler& s, std::vector<int>& dx, int dt, int dim, double h) {
  double acc = 0.0;
  for (int axis = 0; axis < dim; ++axis) {
    double d2 = 0.0;
    for (int j = -2; j <= 2; ++j) {
      dx[static_cast<std::size_t>(axis)] += j;
      d2 += kD2[static_cast<std::size_t>(j + 2)] * s(dx, dt);
      dx[static_cast<std::size_t>(axis)] -= j;
    }
    acc += d2;
  }
  return acc / (h * h);
}

}  // namespace detail

/// Biwave operator u_tttt - (a^2+b^2) (u_tt)_lap + a^2 b^2 lap^2 u evaluated
/// by 4th-order differences at each probe. Probes need t >= 3h so the time
/// stencil stays in the domain.
inline ResidualReport biwave_residual(const SolutionEvaluator& u,
                                      std::span<const std::pair<Point, double>> probes,
                                      double h) {
  if (!(h > 0)) fail(errc::bad_argument, "residual step must be positive");
  const int dim = u.dim();
  const double a2 = u.params().a2(), b2 = u.params().b2();
  ResidualReport rep;
  for (const auto& [x, t] : probes) {
    if (x.dim() != dim) fail(errc::dimension_mismatch, "residual probe dimension");
    if (t < 3.0 * h) fail(errc::stencil_out_of_domain, "residual probe too close to t = 0");
    detail::StencilSampler s(u, x, t, h);
    std::vector<int> dx(static_cast<std::size_t>(dim), 0);

    double utttt = 0.0;
    for (int j = -3; j <= 3; ++j)
      utttt += detail::kD4[static_cast<std::size_t>(j + 3)] * s(dx, j);
    utttt /= h * h * h * h;

    double lap_tt = 0.0;
    for (int j = -2; j <= 2; ++j)
      lap_tt += detail::kD2[static_cast<std::size_t>(j + 2)] * detail::lap_at(s, dx, j, dim, h);
    lap_tt /= h * h;

    // lap^2 by composing per-axis D2 stencils; the diagonal blocks collapse
    // to the 7-point 4th-derivative stencil.
    double bilap = 0.0;
    for (int ai = 0; ai < dim; ++ai) {
      for (int j = -3; j <= 3; ++j) {
        dx[static_cast<std::size_t>(ai)] += j;
        bilap += detail::kD4[static_cast<std::size_t>(j + 3)] * s(dx, 0);
        dx[static_cast<std::size_t>(ai)] -= j;
      }
      for (int aj = ai + 1; aj < dim; ++aj) {
        double cross = 0.0;
        for (int j1 = -2; j1 <= 2; ++j1) {
          for (int j2 = -2; j2 <= 2; ++j2) {
            dx[static_cast<std::size_t>(ai)] += j1;
            dx[static_cast<std::size_t>(aj)] += j2;
            cross += detail::kD2[static_cast<std::size_t>(j1 + 2)] *
                     detail::kD2[static_cast<std::size_t>(j2 + 2)] * s(dx, 0);
            dx[static_cast<std::size_t>(ai)] -= j1;
            dx[static_cast<std::size_t>(aj)] -= j2;
          }
        }
        bilap += 2.0 * cross;
      }
    }
    bilap /= h * h * h * h;

    const double res = utttt - (a2 + b2) * lap_tt + a2 * b2 * bilap;
    rep.max_abs = std::max(rep.max_abs, std::abs(res));
    rep.scale = std::max(rep.scale, std::abs(utttt));
    ++rep.probes;
  }
  rep.finish();
  return rep;
}

struct ErrorNorms {
  double max_abs = 0;
  double mean_abs = 0;
};

/// Max and mean absolute deviation between two evaluators over a grid,
/// visited in flat grid order.
inline ErrorNorms compare(const SolutionEvaluator& u1, const SolutionEvaluator& u2,
                          const EvalGrid& grid) {
  if (u1.dim() != u2.dim() || u1.dim() != grid.dim())
    fail(errc::dimension_mismatch, "compare dimensions");
  ErrorNorms norms;
  const std::size_t count = grid.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto [x, t] = grid.at(i);
    const double d = std::abs(u1(x, t) - u2(x, t));
    norms.max_abs = std::max(norms.max_abs, d);
    sum += d;
  }
  norms.mean_abs = count > 0 ? sum / static_cast<double>(count) : 0.0;
  return norms;
}

namespace detail {

// Fornberg's recurrence: weights of an arbitrary-node stencil approximating
// the m-th derivative at x0.
inline std::vector<double> fornberg_weights(double x0, std::span<const double> nodes, int m) {
  const int nn = static_cast<int>(nodes.size());
  if (m < 0 || nn <= m) fail(errc::bad_argument, "stencil too small for derivative order");
  auto at = [&](int i) { return nodes[static_cast<std::size_t>(i)]; };
  std::vector<std::vector<double>> d(static_cast<std::size_t>(nn),
                                     std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
  auto dd = [&](int i, int k) -> double& {
    return d[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  };
  dd(0, 0) = 1.0;
  double c1 = 1.0;
  double c4 = at(0) - x0;
  for (int i = 1; i < nn; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = at(i) - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = at(i) - at(j);
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) dd(i, k) = c1 * (k * dd(i - 1, k - 1) - c5 * dd(i - 1, k)) / c2;
        dd(i, 0) = -c1 * c5 * dd(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) dd(j, k) = (c4 * dd(j, k) - k * dd(j, k - 1)) / c3;
      dd(j, 0) = c4 * dd(j, 0) / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(static_cast<std::size_t>(nn));
  for (int i = 0; i < nn; ++i) w[static_cast<std::size_t>(i)] = dd(i, m);
  return w;
}

}  // namespace detail

/// Recover the k-th initial time derivative of u by a one-sided stencil on
/// the nodes eps + j*step (j = 0..k+4) extrapolated to t = 0, and report the
/// largest deviation from phi_k over the probe points.
inline double initial_probe(const SolutionEvaluator& u, const InitialData& data, int k, double eps,
                            std::span<const Point> points, double step = 0.0) {
  if (k < 0 || k > 3) fail(errc::bad_argument, "initial probe order " + std::to_string(k));
  if (!(eps > 0)) fail(errc::bad_argument, "initial probe eps");
  if (u.dim() != data.dim()) fail(errc::dimension_mismatch, "initial probe dimensions");
  const double h = step > 0 ? step : eps;
  std::vector<double> nodes(static_cast<std::size_t>(k + 5));
  for (std::size_t j = 0; j < nodes.size(); ++j) nodes[j] = eps + h * static_cast<double>(j);
  const auto w = detail::fornberg_weights(0.0, nodes, k);
  double worst = 0.0;
  for (const auto& x : points) {
    double der = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) der += w[j] * u(x, nodes[j]);
    worst = std::max(worst, std::abs(der - data.phi(k)(x)));
  }
  return worst;
}

}  // namespace biwave
