#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include "biwave/core.hpp"

namespace biwave {

/// Adaptive Dormand-Prince 5(4) for small dense systems. State is a fixed
/// array of complex components; the embedded 4th-order solution drives the
/// step controller.
template <std::size_t N>
class Dopri5 {
 public:
  using State = std::array<std::complex<double>, N>;

  struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double initial_step = 0.0;  // 0: span/100
    std::size_t max_steps = 200000;
  };

  /// Integrate y' = rhs(t, y) from t0 to t1 (t1 >= t0).
  template <class RHS>
  static State integrate(RHS&& rhs, State y, double t0, double t1, const Options& opt = {}) {
    if (!(t1 >= t0)) fail(errc::bad_bounds, "integration backwards in time");
    if (t1 == t0) return y;
    const double span = t1 - t0;
    double h = opt.initial_step > 0 ? opt.initial_step : span / 100.0;
    h = std::min(h, span);
    double t = t0;
    State k1 = rhs(t, y);
    for (std::size_t step = 0; step < opt.max_steps; ++step) {
      const double remaining = t1 - t;
      if (remaining <= 1e-14 * span) return y;
      if (h < 1e-14 * span)
        fail(errc::integrator_failure, "step underflow at t = " + std::to_string(t));
      h = std::min(h, remaining);

      const State k2 = rhs(t + c2 * h, lc(y, h, {{a21, 0, 0, 0, 0, 0}}, {&k1}));
      const State k3 = rhs(t + c3 * h, lc(y, h, {{a31, a32, 0, 0, 0, 0}}, {&k1, &k2}));
      const State k4 = rhs(t + c4 * h, lc(y, h, {{a41, a42, a43, 0, 0, 0}}, {&k1, &k2, &k3}));
      const State k5 =
          rhs(t + c5 * h, lc(y, h, {{a51, a52, a53, a54, 0, 0}}, {&k1, &k2, &k3, &k4}));
      const State k6 =
          rhs(t + h, lc(y, h, {{a61, a62, a63, a64, a65, 0}}, {&k1, &k2, &k3, &k4, &k5}));
      const State y5 = lc(y, h, {{b1, 0, b3, b4, b5, b6}}, {&k1, &k2, &k3, &k4, &k5, &k6});
      const State k7 = rhs(t + h, y5);

      // embedded 4th-order error estimate
      double err = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const std::complex<double> e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                            e6 * k6[i] + e7 * k7[i]);
        const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err = std::max(err, std::abs(e) / sc);
      }
      if (err <= 1.0) {
        t += h;
        y = y5;
        k1 = k7;  // FSAL
      }
      double factor = 0.2;
      if (std::isfinite(err)) factor = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::clamp(factor, 0.2, 5.0);
    }
    fail(errc::integrator_failure, "step budget exhausted");
  }

 private:
  static State lc(const State& y, double h, const std::array<double, 6>& coeff,
                  std::initializer_list<const State*> ks) {
    State out = y;
    std::size_t j = 0;
    for (const State* k : ks) {
      if (coeff[j] != 0.0)
        for (std::size_t i = 0; i < N; ++i) out[i] += h * coeff[j] * (*k)[i];
      ++j;
    }
    return out;
  }

  // Dormand-Prince tableau
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double bh1 = 5179.0 / 57600, bh3 = 7571.0 / 16695, bh4 = 393.0 / 640,
                          bh5 = -92097.0 / 339200, bh6 = 187.0 / 2100, bh7 = 1.0 / 40;
  static constexpr double e1 = b1 - bh1, e3 = b3 - bh3, e4 = b4 - bh4, e5 = b5 - bh5,
                          e6 = b6 - bh6, e7 = -bh7;
};

}  // namespace biwave
