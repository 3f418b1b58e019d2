#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "biwave/core.hpp"
#include "biwave/field.hpp"
#include "biwave/ode.hpp"
#include "biwave/params.hpp"
#include "biwave/solution.hpp"

namespace biwave {

using SpectralData = std::array<std::complex<double>, 4>;

/// Amplitudes of the four-branch general solution of the per-mode ODE
///   u'''' + (a^2 + b^2)|k|^2 u'' + a^2 b^2 |k|^4 u = 0,
///   u(t) = C1 cos(a|k|t) + C2 sin(a|k|t) + C3 cos(b|k|t) + C4 sin(b|k|t).
struct ModeCoefficients {
  std::complex<double> c1, c2, c3, c4;
  Point k;
  double freq = 0;  // |k|

  std::complex<double> value(const BiwaveParams& p, double t) const {
    return c1 * std::cos(p.a * freq * t) + c2 * std::sin(p.a * freq * t) +
           c3 * std::cos(p.b * freq * t) + c4 * std::sin(p.b * freq * t);
  }
};

namespace detail {

// Gaussian elimination with partial pivoting; the systems here are 4x4.
template <std::size_t N>
std::array<std::complex<double>, N> solve_dense(
    std::array<std::array<std::complex<double>, N>, N> m,
    std::array<std::complex<double>, N> rhs) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    std::swap(m[col], m[piv]);
    std::swap(rhs[col], rhs[piv]);
    if (std::abs(m[col][col]) == 0.0) fail(errc::bad_argument, "singular mode system");
    for (std::size_t r = col + 1; r < N; ++r) {
      const std::complex<double> f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < N; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  std::array<std::complex<double>, N> x{};
  for (std::size_t r = N; r-- > 0;) {
    std::complex<double> s = rhs[r];
    for (std::size_t c = r + 1; c < N; ++c) s -= m[r][c] * x[c];
    x[r] = s / m[r][r];
  }
  return x;
}

}  // namespace detail

/// Solve the 4x4 initial-condition system for one mode and cross-check the
/// result against the closed-form amplitudes; a disagreement beyond 1e-10
/// means a transcription error in one of the two routes and throws.
inline ModeCoefficients mode_coefficients(const Point& k, const SpectralData& data,
                                          const BiwaveParams& p) {
  const double q = k.norm();
  if (!(q > 0)) fail(errc::bad_argument, "zero wavevector: use zero_mode");
  const double a = p.a, b = p.b;
  const double gap = p.speed_gap();

  std::array<std::array<std::complex<double>, 4>, 4> m{};
  m[0] = {1.0, 0.0, 1.0, 0.0};
  m[1] = {0.0, a * q, 0.0, b * q};
  m[2] = {-a * a * q * q, 0.0, -b * b * q * q, 0.0};
  m[3] = {0.0, -a * a * a * q * q * q, 0.0, -b * b * b * q * q * q};
  const auto sol = detail::solve_dense<4>(m, data);

  // closed forms
  const std::complex<double> c1 = -(b * b * q * q * data[0] + data[2]) / (gap * q * q);
  const std::complex<double> c3 = (a * a * q * q * data[0] + data[2]) / (gap * q * q);
  const std::complex<double> c2 = -(b * b * q * q * data[1] + data[3]) / (a * gap * q * q * q);
  const std::complex<double> c4 = (a * a * q * q * data[1] + data[3]) / (b * gap * q * q * q);

  double scale = 1.0;
  for (const auto& d : data) scale = std::max(scale, std::abs(d));
  const double mismatch = std::max(std::max(std::abs(sol[0] - c1), std::abs(sol[1] - c2)),
                                   std::max(std::abs(sol[2] - c3), std::abs(sol[3] - c4)));
  if (mismatch > 1e-10 * scale)
    fail(errc::bad_argument, "mode coefficient self-test mismatch " + std::to_string(mismatch));

  return ModeCoefficients{sol[0], sol[1], sol[2], sol[3], k, q};
}

/// |k| = 0 limit: u'''' = 0, so the mode is the cubic Taylor polynomial.
inline std::complex<double> zero_mode(const SpectralData& data, double t) {
  return data[0] + t * (data[1] + t * (0.5 * data[2] + t * data[3] / 6.0));
}

namespace detail {

struct OracleMode {
  bool is_zero_mode = false;
  SpectralData data{};  // retained for the zero mode
  ModeCoefficients coeff;
};

struct PointLess {
  bool operator()(const Point& a, const Point& b) const {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    for (int i = 0; i < a.dim(); ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return false;
  }
};

inline std::map<Point, SpectralData, PointLess> gather_spectra(const InitialData& data) {
  std::map<Point, SpectralData, PointLess> spectra;
  for (int i = 0; i < 4; ++i) {
    const ScalarField& f = data.phi(i);
    if (f.is_zero()) continue;
    if (f.kind() != ScalarField::Kind::trig_poly)
      fail(errc::bad_field_kind, "oracle needs trig-polynomial data");
    for (const auto& m : f.modes()) spectra[m.k][static_cast<std::size_t>(i)] += m.amp;
  }
  return spectra;
}

}  // namespace detail

/// Ground-truth evaluator for trig-polynomial data: every wavevector evolves
/// by its closed-form mode solution and the k = 0 component by zero_mode.
inline SolutionEvaluator oracle_solution(const InitialData& data, const BiwaveParams& p) {
  if (data.dim() != p.n) fail(errc::dimension_mismatch, "oracle data dimension");
  auto spectra = detail::gather_spectra(data);
  std::vector<detail::OracleMode> modes;
  modes.reserve(spectra.size());
  for (const auto& [k, sd] : spectra) {
    detail::OracleMode om;
    if (k.norm2() == 0.0) {
      om.is_zero_mode = true;
      om.data = sd;
      om.coeff.k = k;
    } else {
      om.coeff = mode_coefficients(k, sd, p);
    }
    modes.push_back(std::move(om));
  }
  return SolutionEvaluator(
      p, SolutionEvaluator::Provenance::oracle, [modes, p](const Point& x, double t) {
        std::complex<double> u = 0.0;
        for (const auto& m : modes) {
          const std::complex<double> amp =
              m.is_zero_mode ? zero_mode(m.data, t) : m.coeff.value(p, t);
          u += amp * std::exp(std::complex<double>(0.0, dot(m.coeff.k, x)));
        }
        return u.real();
      });
}

/// Forced single mode: integrate
///   u'''' + (a^2 + b^2)|k|^2 u'' + a^2 b^2 |k|^4 u = g(t)
/// from the given spectral data, with adaptive stepping.
template <class G>
std::complex<double> forced_mode_solution(const Point& k, G&& g, const SpectralData& data,
                                          const BiwaveParams& p, double t, double rtol = 1e-10) {
  const double q2 = k.norm2();
  const double c2 = (p.a2() + p.b2()) * q2;
  const double c0 = p.a2() * p.b2() * q2 * q2;
  auto rhs = [&](double tau, const Dopri5<4>::State& y) {
    return Dopri5<4>::State{y[1], y[2], y[3], g(tau) - c2 * y[2] - c0 * y[0]};
  };
  Dopri5<4>::Options opt;
  opt.rtol = rtol;
  opt.atol = 1e-14;
  const auto y = Dopri5<4>::integrate(rhs, Dopri5<4>::State{data[0], data[1], data[2], data[3]},
                                      0.0, t, opt);
  return y[0];
}

}  // namespace biwave
