#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "biwave/biwave.hpp"
#include "helpers.hpp"

using namespace biwave;
using Catch::Approx;

namespace {

ForcingField cos_x_forcing(double amp, TimeAmplitude g) {
  return ForcingField::trig(1, {{Point{1.0}, {0.5 * amp, 0.0}, g},
                                {Point{-1.0}, {0.5 * amp, 0.0}, g}});
}

}  // namespace

TEST_CASE("zero forcing reproduces the homogeneous solution exactly") {
  const auto p = testing::line_example_params();
  const auto data = testing::line_example_data();
  const auto hom = solve_1d(data, p);
  const auto forced = solve_nonhomogeneous(data, ForcingField::zero(1), p);
  for (double x : {-1.0, 0.4, 2.0})
    for (double t : {0.0, 0.6, 1.7}) REQUIRE(forced(Point{x}, t) == hom(Point{x}, t));
}

TEST_CASE("constant unit forcing gives t^4/24") {
  const auto p = make_params(1.0, 0.5, 1);
  const auto f =
      ForcingField::trig(1, {{Point{0.0}, {1.0, 0.0}, TimeAmplitude::constant(1.0)}});
  const auto u = solve_nonhomogeneous(InitialData::zero(1), f, p);
  for (double t : {0.5, 1.3, 2.0})
    REQUIRE(u(Point{0.7}, t) == Approx(t * t * t * t / 24.0).margin(1e-6));
}

TEST_CASE("cos(x) forcing matches the forced-mode reference") {
  const auto p = make_params(1.0, 0.5, 1);
  const auto u =
      solve_nonhomogeneous(InitialData::zero(1), cos_x_forcing(1.0, TimeAmplitude::constant(1.0)), p);
  const auto mode =
      forced_mode_solution(Point{1.0}, [](double) { return 0.5; }, {}, p, 1.1);
  const double expect = 2.0 * (mode * std::exp(std::complex<double>(0.0, 0.3))).real();
  REQUIRE_THAT(u(Point{0.3}, 1.1), Catch::Matchers::WithinAbs(expect, 1e-4));
}

TEST_CASE("superposition of data and forcing responses") {
  const auto p = make_params(1.0, 0.5, 1);
  const auto data = testing::line_example_data();
  const auto f = cos_x_forcing(0.8, TimeAmplitude::cosine(1.5));
  const auto both = solve_nonhomogeneous(data, f, p);
  const auto data_only = solve_homogeneous(data, p);
  const auto forcing_only = solve_nonhomogeneous(InitialData::zero(1), f, p);
  for (double x : {-0.7, 0.9})
    for (double t : {0.4, 1.2, 1.9})
      REQUIRE_THAT(both(Point{x}, t), Catch::Matchers::WithinAbs(
                                          data_only(Point{x}, t) + forcing_only(Point{x}, t),
                                          1e-10));
}

TEST_CASE("forced response launches from rest") {
  // all four derivative probes of the zero-data forced solution vanish
  const auto p = make_params(1.0, 0.5, 1);
  const auto f = cos_x_forcing(1.0, TimeAmplitude::cosine(2.0));
  const auto u = solve_nonhomogeneous(InitialData::zero(1), f, p);
  const std::vector<Point> pts{Point{0.0}, Point{-1.3}, Point{0.8}};
  for (int k = 0; k <= 3; ++k) {
    const double dev = initial_probe(u, InitialData::zero(1), k, 1e-4, pts, 6e-3);
    INFO("k = " << k);
    REQUIRE(dev < 1e-3);
  }
}

TEST_CASE("forced-mode oracle equivalence in one and three dimensions") {
  SECTION("n = 1, sine envelope") {
    const auto p = make_params(1.0, 0.5, 1);
    const auto g = TimeAmplitude::sine(1.2);
    const auto u = solve_nonhomogeneous(InitialData::zero(1), cos_x_forcing(0.7, g), p);
    auto ghat = [&](double tau) { return 0.35 * std::sin(1.2 * tau); };
    for (double t : {0.6, 1.4}) {
      const auto mode = forced_mode_solution(Point{1.0}, ghat, {}, p, t);
      const double expect = 2.0 * (mode * std::exp(std::complex<double>(0.0, -0.4))).real();
      REQUIRE_THAT(u(Point{-0.4}, t), Catch::Matchers::WithinAbs(expect, 1e-4));
    }
  }
  SECTION("n = 3, cosine envelope") {
    const auto p = make_params(1.0, 0.5, 3);
    const Point k{1.0, 0.0, 1.0};
    const Point nk{-1.0, 0.0, -1.0};
    const auto ta = TimeAmplitude::cosine(2.0);
    const auto f = ForcingField::trig(3, {{k, {0.5, 0.0}, ta}, {nk, {0.5, 0.0}, ta}});
    DuhamelConfig dc;
    dc.inner.sphere_level = 4;
    const auto u = solve_nonhomogeneous(InitialData::zero(3), f, p, dc);
    auto ghat = [](double tau) { return 0.5 * std::cos(2.0 * tau); };
    const Point x{0.3, -0.1, 0.6};
    for (double t : {0.7, 1.1}) {
      const auto mode = forced_mode_solution(k, ghat, {}, p, t);
      const double expect = 2.0 * (mode * std::exp(std::complex<double>(0.0, dot(k, x)))).real();
      REQUIRE_THAT(u(x, t), Catch::Matchers::WithinAbs(expect, 1e-4));
    }
  }
}

TEST_CASE("closure forcing follows the same path as its trig twin") {
  const auto p = make_params(1.0, 0.5, 1);
  const auto trig = cos_x_forcing(1.0, TimeAmplitude::cosine(2.0));
  const auto closure = ForcingField::closure(1, [](const Point& x, double t) {
    return std::cos(x[0]) * std::cos(2.0 * t);
  });
  const auto u_trig = solve_nonhomogeneous(InitialData::zero(1), trig, p);
  const auto u_closure = solve_nonhomogeneous(InitialData::zero(1), closure, p);
  for (double t : {0.4, 1.2})
    REQUIRE_THAT(u_closure(Point{0.3}, t),
                 Catch::Matchers::WithinAbs(u_trig(Point{0.3}, t), 1e-12));
}

TEST_CASE("config validation") {
  DuhamelConfig dc;
  dc.tau_order = 2;
  CHECK_THROWS_AS(dc.validate(), Error);
  dc.tau_order = 0;
  CHECK_NOTHROW(dc.validate());
  const auto p = make_params(1.0, 0.5, 1);
  CHECK_THROWS_AS(
      solve_nonhomogeneous(InitialData::zero(2), ForcingField::zero(2), p, DuhamelConfig{}),
      Error);
}
