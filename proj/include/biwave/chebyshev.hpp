#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "biwave/core.hpp"

namespace biwave::detail {

/// Chebyshev interpolant of a smooth function on [lo, hi], built from samples
/// at first-kind Chebyshev points and evaluated by Clenshaw recurrence.
class ChebyshevInterpolant {
 public:
  static std::vector<double> sample_abscissae(double lo, double hi, int n_nodes) {
    if (n_nodes < 2) fail(errc::bad_order, "interpolant needs >= 2 nodes");
    std::vector<double> xs(static_cast<std::size_t>(n_nodes));
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double theta = kPi * (static_cast<double>(j) + 0.5) / static_cast<double>(n_nodes);
      xs[j] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(theta);
    }
    return xs;
  }

  static ChebyshevInterpolant from_samples(double lo, double hi, const std::vector<double>& f) {
    ChebyshevInterpolant c;
    c.lo_ = lo;
    c.hi_ = hi;
    const std::size_t n = f.size();
    c.coef_.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        s += f[j] * std::cos(kPi * static_cast<double>(k) * (static_cast<double>(j) + 0.5) /
                             static_cast<double>(n));
      c.coef_[k] = 2.0 * s / static_cast<double>(n);
    }
    c.coef_[0] *= 0.5;
    return c;
  }

  template <class F>
  static ChebyshevInterpolant build(F&& f, double lo, double hi, int n_nodes) {
    const auto xs = sample_abscissae(lo, hi, n_nodes);
    std::vector<double> samples(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) samples[j] = f(xs[j]);
    return from_samples(lo, hi, samples);
  }

  double operator()(double x) const {
    const double u = (2.0 * x - lo_ - hi_) / (hi_ - lo_);
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = coef_.size(); k-- > 1;) {
      const double b0 = 2.0 * u * b1 - b2 + coef_[k];
      b2 = b1;
      b1 = b0;
    }
    return u * b1 - b2 + coef_[0];
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_ = 0, hi_ = 1;
  std::vector<double> coef_;
};

}  // namespace biwave::detail
