#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "biwave/core.hpp"

namespace biwave {

/// One complex exponential amp * e^{i k.x}. Wavevectors are stored already
/// scaled by the base frequency, so k components are base_freq * integers.
struct TrigMode {
  Point k;
  std::complex<double> amp;
};

/// Evaluable scalar field on R^n. Trig polynomials and Gaussians are
/// structured (the oracle and the projection helpers need the modes);
/// closures are accepted for solver evaluation only.
class ScalarField {
 public:
  enum class Kind { zero, trig_poly, gaussian, closure };

  ScalarField() = default;

  static ScalarField zero(int dim) {
    ScalarField f;
    f.kind_ = Kind::zero;
    f.dim_ = check_dim(dim);
    return f;
  }

  /// Trig polynomial from an explicit conjugate-symmetric mode list.
  /// Rejects mode sets that would evaluate to complex values.
  static ScalarField trig(int dim, std::vector<TrigMode> modes) {
    ScalarField f;
    f.kind_ = Kind::trig_poly;
    f.dim_ = check_dim(dim);
    for (const auto& m : modes)
      if (m.k.dim() != dim) fail(errc::dimension_mismatch, "mode wavevector dimension");
    check_conjugate_symmetry(modes);
    f.modes_ = std::move(modes);
    return f;
  }

  /// cos_amp*cos(k.x) + sin_amp*sin(k.x) as a conjugate-symmetric pair.
  static ScalarField harmonic(const Point& k, double cos_amp, double sin_amp) {
    std::vector<TrigMode> modes;
    if (k.norm2() == 0.0) {
      modes.push_back({k, {cos_amp, 0.0}});
    } else {
      Point neg = k;
      for (int i = 0; i < k.dim(); ++i) neg[i] = -k[i];
      modes.push_back({k, std::complex<double>(0.5 * cos_amp, -0.5 * sin_amp)});
      modes.push_back({neg, std::complex<double>(0.5 * cos_amp, 0.5 * sin_amp)});
    }
    return trig(k.dim(), std::move(modes));
  }

  static ScalarField constant(int dim, double c) {
    return harmonic(Point(dim), c, 0.0);
  }

  /// Concatenate the mode lists of several trig fields of one dimension.
  static ScalarField trig_sum(const std::vector<ScalarField>& parts) {
    if (parts.empty()) fail(errc::bad_argument, "trig_sum of nothing");
    const int dim = parts.front().dim();
    std::vector<TrigMode> modes;
    for (const auto& f : parts) {
      if (f.dim() != dim) fail(errc::dimension_mismatch, "trig_sum dimensions");
      if (f.is_zero()) continue;
      if (f.kind() != Kind::trig_poly) fail(errc::bad_field_kind, "trig_sum needs trig fields");
      for (const auto& m : f.modes()) modes.push_back(m);
    }
    if (modes.empty()) return zero(dim);
    return trig(dim, std::move(modes));
  }

  /// exp(-|x - center|^2 / width^2)
  static ScalarField gaussian(const Point& center, double width) {
    if (!(width > 0)) fail(errc::bad_argument, "gaussian width must be positive");
    ScalarField f;
    f.kind_ = Kind::gaussian;
    f.dim_ = check_dim(center.dim());
    f.center_ = center;
    f.width_ = width;
    return f;
  }

  static ScalarField closure(int dim, std::function<double(const Point&)> fn) {
    ScalarField f;
    f.kind_ = Kind::closure;
    f.dim_ = check_dim(dim);
    f.fn_ = std::make_shared<std::function<double(const Point&)>>(std::move(fn));
    return f;
  }

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool is_zero() const { return kind_ == Kind::zero; }
  bool is_trig() const { return kind_ == Kind::trig_poly || kind_ == Kind::zero; }
  const std::vector<TrigMode>& modes() const { return modes_; }

  double operator()(const Point& x) const {
    if (x.dim() != dim_) fail(errc::dimension_mismatch, "field eval: point dimension");
    return eval_unchecked(x);
  }

  /// Hot-path evaluation; the caller guarantees x.dim() == dim().
  double eval_unchecked(const Point& x) const {
    switch (kind_) {
      case Kind::zero:
        return 0.0;
      case Kind::trig_poly: {
        double s = 0.0;
        for (const auto& m : modes_) {
          const double ph = dot(m.k, x);
          s += m.amp.real() * std::cos(ph) - m.amp.imag() * std::sin(ph);
        }
        return s;
      }
      case Kind::gaussian: {
        double q = 0.0;
        for (int i = 0; i < dim_; ++i) {
          const double d = x[i] - center_[i];
          q += d * d;
        }
        return std::exp(-q / (width_ * width_));
      }
      case Kind::closure:
        return (*fn_)(x);
    }
    return 0.0;
  }

  /// Full complex sum; the imaginary part is the symmetry residue.
  std::complex<double> eval_complex(const Point& x) const {
    if (kind_ != Kind::trig_poly)
      fail(errc::bad_field_kind, "complex evaluation requires a trig polynomial");
    if (x.dim() != dim_) fail(errc::dimension_mismatch, "field eval: point dimension");
    std::complex<double> s = 0.0;
    for (const auto& m : modes_) s += m.amp * std::exp(std::complex<double>(0.0, dot(m.k, x)));
    return s;
  }

  /// Laplacian of a trig polynomial: per-mode multiplier -|k|^2.
  ScalarField laplacian() const {
    if (!is_trig()) fail(errc::bad_field_kind, "laplacian requires a trig polynomial");
    if (kind_ == Kind::zero) return *this;
    std::vector<TrigMode> out = modes_;
    for (auto& m : out) m.amp *= -m.k.norm2();
    return trig(dim_, std::move(out));
  }

  ScalarField scaled(double s) const {
    if (!is_trig()) fail(errc::bad_field_kind, "scaling requires a trig polynomial");
    if (kind_ == Kind::zero) return *this;
    std::vector<TrigMode> out = modes_;
    for (auto& m : out) m.amp *= s;
    return trig(dim_, std::move(out));
  }

 private:
  static int check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim) fail(errc::bad_dimension, "field dimension " + std::to_string(dim));
    return dim;
  }

  static void check_conjugate_symmetry(const std::vector<TrigMode>& modes) {
    // c_{-k} must equal conj(c_k); each unmatched imaginary piece makes the
    // field complex-valued.
    for (const auto& m : modes) {
      std::complex<double> at_k = 0, at_neg = 0;
      for (const auto& o : modes) {
        bool same = true, neg = true;
        for (int i = 0; i < m.k.dim(); ++i) {
          if (o.k[i] != m.k[i]) same = false;
          if (o.k[i] != -m.k[i]) neg = false;
        }
        if (same) at_k += o.amp;
        if (neg) at_neg += o.amp;
      }
      const double tol = 1e-12 * (1.0 + std::abs(at_k));
      if (std::abs(at_neg - std::conj(at_k)) > tol)
        fail(errc::bad_field_kind, "trig amplitudes are not conjugate-symmetric");
    }
  }

  Kind kind_ = Kind::zero;
  int dim_ = 1;
  std::vector<TrigMode> modes_;
  Point center_;
  double width_ = 1.0;
  std::shared_ptr<std::function<double(const Point&)>> fn_;
};

inline double eval_field(const ScalarField& f, const Point& x) { return f(x); }

/// The four Cauchy data fields (u, u_t, u_tt, u_ttt at t = 0).
struct InitialData {
  ScalarField phi0, phi1, phi2, phi3;

  int dim() const { return phi0.dim(); }
  const ScalarField& phi(int k) const {
    switch (k) {
      case 0: return phi0;
      case 1: return phi1;
      case 2: return phi2;
      case 3: return phi3;
    }
    fail(errc::bad_argument, "phi index " + std::to_string(k));
  }

  static InitialData zero(int dim) {
    return InitialData{ScalarField::zero(dim), ScalarField::zero(dim), ScalarField::zero(dim),
                       ScalarField::zero(dim)};
  }
};

inline InitialData make_initial_data(ScalarField phi0, ScalarField phi1, ScalarField phi2,
                                     ScalarField phi3) {
  const int n = phi0.dim();
  if (phi1.dim() != n || phi2.dim() != n || phi3.dim() != n)
    fail(errc::dimension_mismatch, "initial data fields must share a dimension");
  return InitialData{std::move(phi0), std::move(phi1), std::move(phi2), std::move(phi3)};
}

/// Separable time factor for forcing modes.
struct TimeAmplitude {
  enum class Kind { constant, cosine, sine, closure };
  Kind kind = Kind::constant;
  double value = 1.0;   // constant value
  double omega = 0.0;   // angular frequency for cosine/sine
  std::function<double(double)> fn;

  static TimeAmplitude constant(double v) { return {Kind::constant, v, 0.0, {}}; }
  static TimeAmplitude cosine(double w) { return {Kind::cosine, 1.0, w, {}}; }
  static TimeAmplitude sine(double w) { return {Kind::sine, 1.0, w, {}}; }
  static TimeAmplitude closure(std::function<double(double)> g) {
    return {Kind::closure, 1.0, 0.0, std::move(g)};
  }

  double operator()(double t) const {
    switch (kind) {
      case Kind::constant: return value;
      case Kind::cosine: return std::cos(omega * t);
      case Kind::sine: return std::sin(omega * t);
      case Kind::closure: return fn(t);
    }
    return 0.0;
  }
};

struct ForcingMode {
  Point k;
  std::complex<double> amp;
  TimeAmplitude g;
};

/// Right-hand side f(x, t). Trig-in-x forcing carries per-wavevector time
/// amplitudes; closures are solver-only (no oracle comparison).
class ForcingField {
 public:
  enum class Kind { zero, trig_poly, closure };

  static ForcingField zero(int dim) {
    ForcingField f;
    f.kind_ = Kind::zero;
    f.dim_ = dim;
    return f;
  }

  static ForcingField trig(int dim, std::vector<ForcingMode> modes) {
    ForcingField f;
    f.kind_ = Kind::trig_poly;
    f.dim_ = dim;
    for (const auto& m : modes)
      if (m.k.dim() != dim) fail(errc::dimension_mismatch, "forcing wavevector dimension");
    f.modes_ = std::move(modes);
    return f;
  }

  static ForcingField closure(int dim, std::function<double(const Point&, double)> fn) {
    ForcingField f;
    f.kind_ = Kind::closure;
    f.dim_ = dim;
    f.fn_ = std::make_shared<std::function<double(const Point&, double)>>(std::move(fn));
    return f;
  }

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool is_zero() const { return kind_ == Kind::zero; }
  const std::vector<ForcingMode>& modes() const { return modes_; }

  double operator()(const Point& x, double t) const {
    if (x.dim() != dim_) fail(errc::dimension_mismatch, "forcing eval: point dimension");
    switch (kind_) {
      case Kind::zero:
        return 0.0;
      case Kind::trig_poly: {
        double s = 0.0;
        for (const auto& m : modes_) {
          const double ph = dot(m.k, x);
          const double g = m.g(t);
          s += g * (m.amp.real() * std::cos(ph) - m.amp.imag() * std::sin(ph));
        }
        return s;
      }
      case Kind::closure:
        return (*fn_)(x, t);
    }
    return 0.0;
  }

  /// Freeze the time slice f(., tau) as a scalar field.
  ScalarField at_time(double tau) const {
    switch (kind_) {
      case Kind::zero:
        return ScalarField::zero(dim_);
      case Kind::trig_poly: {
        std::vector<TrigMode> slice;
        slice.reserve(modes_.size());
        for (const auto& m : modes_) slice.push_back({m.k, m.amp * m.g(tau)});
        return ScalarField::trig(dim_, std::move(slice));
      }
      case Kind::closure: {
        auto fn = fn_;
        return ScalarField::closure(dim_, [fn, tau](const Point& x) { return (*fn)(x, tau); });
      }
    }
    return ScalarField::zero(dim_);
  }

 private:
  Kind kind_ = Kind::zero;
  int dim_ = 1;
  std::vector<ForcingMode> modes_;
  std::shared_ptr<std::function<double(const Point&, double)>> fn_;
};

}  // namespace biwave
