#pragma once

// Shared fixtures: the worked 1-D example, random trig data, closed-form
// checks used across the suites.

#include <cmath>
#include <random>
#include <vector>

#include "biwave/biwave.hpp"

namespace biwave::testing {

/// phi1 = sin x, phi2 = cos x with speeds (1, 1/2).
inline InitialData line_example_data() {
  return make_initial_data(ScalarField::zero(1), ScalarField::harmonic(Point{1.0}, 0.0, 1.0),
                           ScalarField::harmonic(Point{1.0}, 1.0, 0.0), ScalarField::zero(1));
}

inline BiwaveParams line_example_params() { return make_params(1.0, 0.5, 1); }

/// Closed form of the line example, written out independently of any solver.
inline double line_example_exact(double x, double t) {
  return (4.0 * std::cos(0.5 * t) * std::cos(x) - 4.0 * std::cos(t) * std::cos(x) -
          (-8.0 * std::sin(0.5 * t) + std::sin(t)) * std::sin(x)) /
         3.0;
}

/// Random integer wavevector with |k| <= max_norm (nonzero unless allow_zero).
inline Point random_wavevector(std::mt19937& rng, int dim, double max_norm, bool allow_zero) {
  std::uniform_int_distribution<int> comp(-3, 3);
  for (;;) {
    Point k(dim);
    for (int i = 0; i < dim; ++i) k[i] = comp(rng);
    if (k.norm() > max_norm) continue;
    if (!allow_zero && k.norm2() == 0.0) continue;
    return k;
  }
}

/// Random conjugate-symmetric trig polynomial with amplitudes in [-1, 1].
inline ScalarField random_trig_field(std::mt19937& rng, int dim, int n_modes,
                                     double max_norm = 3.0, bool allow_zero_mode = true) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::vector<ScalarField> parts;
  for (int m = 0; m < n_modes; ++m) {
    const Point k = random_wavevector(rng, dim, max_norm, allow_zero_mode);
    parts.push_back(ScalarField::harmonic(k, amp(rng), amp(rng)));
  }
  return ScalarField::trig_sum(parts);
}

inline InitialData random_data(std::mt19937& rng, int dim, int n_modes) {
  return make_initial_data(random_trig_field(rng, dim, n_modes),
                           random_trig_field(rng, dim, n_modes),
                           random_trig_field(rng, dim, n_modes),
                           random_trig_field(rng, dim, n_modes));
}

inline Point random_point(std::mt19937& rng, int dim, double radius = 2.0) {
  std::uniform_real_distribution<double> coord(-radius, radius);
  Point x(dim);
  for (int i = 0; i < dim; ++i) x[i] = coord(rng);
  return x;
}

/// Largest amplitude in the data, for relative tolerances.
inline double amplitude_scale(const InitialData& data) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (const auto& m : data.phi(i).modes()) s = std::max(s, std::abs(m.amp));
  return s;
}

}  // namespace biwave::testing
