#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace biwave {

/// Highest spatial dimension the library handles (odd solver up to n=7).
inline constexpr int kMaxDim = 8;

enum class errc {
  nonpositive_speed,
  degenerate_speeds,
  speed_ordering,
  bad_dimension,
  dimension_mismatch,
  bad_order,
  unsupported_dimension,
  bad_bounds,
  bad_field_kind,
  bad_argument,
  stencil_out_of_domain,
  integrator_failure,
  parse_error,
  validation_error,
  io_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::nonpositive_speed: return "nonpositive-speed";
    case errc::degenerate_speeds: return "degenerate-speeds";
    case errc::speed_ordering: return "speed-ordering";
    case errc::bad_dimension: return "bad-dimension";
    case errc::dimension_mismatch: return "dimension-mismatch";
    case errc::bad_order: return "bad-order";
    case errc::unsupported_dimension: return "unsupported-dimension";
    case errc::bad_bounds: return "bad-bounds";
    case errc::bad_field_kind: return "bad-field-kind";
    case errc::bad_argument: return "bad-argument";
    case errc::stencil_out_of_domain: return "stencil-out-of-domain";
    case errc::integrator_failure: return "integrator-failure";
    case errc::parse_error: return "parse-error";
    case errc::validation_error: return "validation-error";
    case errc::io_error: return "io-error";
  }
  return "unknown";
}

/// All library failures are reported through this exception; `code()` gives
/// the machine-checkable reason.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

/// Point in R^n, n <= kMaxDim. Fixed storage keeps field evaluation
/// allocation-free in quadrature loops.
struct Point {
  std::array<double, kMaxDim> c{};
  int n = 0;

  Point() = default;
  explicit Point(int dim) : n(dim) {
    if (dim < 0 || dim > kMaxDim) fail(errc::bad_dimension, "point dimension " + std::to_string(dim));
  }
  Point(std::initializer_list<double> xs) : n(static_cast<int>(xs.size())) {
    if (n > kMaxDim) fail(errc::bad_dimension, "point dimension " + std::to_string(n));
    int i = 0;
    for (double v : xs) c[static_cast<std::size_t>(i++)] = v;
  }

  int dim() const { return n; }
  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

  double norm2() const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.n != b.n) return false;
    for (int i = 0; i < a.n; ++i)
      if (a[i] != b[i]) return false;
    return true;
  }
};

inline double dot(const Point& a, const Point& b) {
  double s = 0;
  for (int i = 0; i < a.n; ++i) s += a[i] * b[i];
  return s;
}

/// x + r*y, both of dimension n.
inline Point axpy(const Point& x, double r, const Point& y) {
  Point p = x;
  for (int i = 0; i < x.n; ++i) p[i] += r * y[i];
  return p;
}

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Surface area of the unit sphere S^{n-1} in R^n: 2 pi^{n/2} / Gamma(n/2).
/// unit_sphere_area(1) = 2 (counting measure on {-1,+1}).
inline double unit_sphere_area(int n) {
  if (n < 1) fail(errc::bad_dimension, "sphere area in dimension " + std::to_string(n));
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

/// k!! with the empty products (0)!! = (-1)!! = 1.
inline double double_factorial(int k) {
  double p = 1.0;
  for (int i = k; i >= 2; i -= 2) p *= i;
  return p;
}

}  // namespace biwave
