#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "biwave/biwave.hpp"
#include "helpers.hpp"

using namespace biwave;
using Catch::Approx;

namespace {

SolverConfig smoke_config(int n) {
  SolverConfig cfg;
  cfg.sphere_level = 4;              // 16 x 32 angular nodes
  if (n >= 5) cfg.profile_nodes = 24;
  return cfg;
}

}  // namespace

TEST_CASE("solve_1d on the worked example") {
  const auto data = testing::line_example_data();
  const auto p = testing::line_example_params();
  const auto u = solve_1d(data, p);

  SECTION("vanishes at t = 0") {
    for (double x : {-3.0, -0.4, 0.0, 1.7}) REQUIRE(u(Point{x}, 0.0) == 0.0);
  }
  SECTION("golden values") {
    CHECK(u(Point{0.0}, kPi) == Approx(4.0 / 3.0).margin(1e-10));
    CHECK(u(Point{kPi / 2}, kPi) == Approx(8.0 / 3.0).margin(1e-10));
  }
  SECTION("matches the closed form everywhere sampled") {
    for (double x : {-2.5, -1.0, 0.3, 2.0})
      for (double t : {0.1, 0.9, 1.7, 3.0})
        REQUIRE(u(Point{x}, t) == Approx(testing::line_example_exact(x, t)).margin(1e-10));
  }
}

TEST_CASE("solvers annihilate zero data") {
  SECTION("n = 1") {
    const auto u = solve_1d(InitialData::zero(1), make_params(1.0, 0.5, 1));
    CHECK(u(Point{0.3}, 1.1) == 0.0);
  }
  SECTION("n = 3") {
    const auto u = solve_odd(InitialData::zero(3), make_params(1.0, 0.5, 3), smoke_config(3));
    CHECK(u(Point{0.3, 0.0, -1.0}, 1.1) == 0.0);
  }
  SECTION("n = 2") {
    const auto u = solve_even(InitialData::zero(2), make_params(1.0, 0.5, 2), smoke_config(2));
    CHECK(u(Point{0.3, 0.0}, 1.1) == 0.0);
  }
}

TEST_CASE("constant velocity datum integrates to c t") {
  // zero-frequency mode: u'''' = 0 with data (0, c, 0, 0)
  const double c = 0.8;
  SECTION("n = 3") {
    const auto p = make_params(1.3, 0.6, 3);
    const auto data = make_initial_data(ScalarField::zero(3), ScalarField::constant(3, c),
                                        ScalarField::zero(3), ScalarField::zero(3));
    const auto u = solve_odd(data, p, smoke_config(3));
    for (double t : {0.3, 1.0, 1.9})
      REQUIRE(u(Point{0.4, -0.2, 0.9}, t) == Approx(c * t).margin(1e-8));
  }
  SECTION("n = 2") {
    const auto p = make_params(1.3, 0.6, 2);
    const auto data = make_initial_data(ScalarField::zero(2), ScalarField::constant(2, c),
                                        ScalarField::zero(2), ScalarField::zero(2));
    const auto u = solve_even(data, p, smoke_config(2));
    for (double t : {0.3, 1.0, 1.9})
      REQUIRE(u(Point{0.4, -0.2}, t) == Approx(c * t).margin(1e-6));
  }
  SECTION("n = 5 and n = 7") {
    for (int n : {5, 7}) {
      const auto p = make_params(1.3, 0.6, n);
      SolverConfig cfg;
      cfg.sphere_level = 2;
      cfg.profile_nodes = 16;
      const auto data = make_initial_data(ScalarField::zero(n), ScalarField::constant(n, c),
                                          ScalarField::zero(n), ScalarField::zero(n));
      const auto u = solve_odd(data, p, cfg);
      std::mt19937 rng(static_cast<unsigned>(n));
      REQUIRE(u(testing::random_point(rng, n, 0.5), 1.2) == Approx(c * 1.2).margin(1e-6));
    }
  }
  SECTION("n = 4 and n = 6") {
    for (int n : {4, 6}) {
      const auto p = make_params(1.3, 0.6, n);
      SolverConfig cfg;
      cfg.sphere_level = 2;
      cfg.profile_nodes = 16;
      const auto data = make_initial_data(ScalarField::zero(n), ScalarField::constant(n, c),
                                          ScalarField::zero(n), ScalarField::zero(n));
      const auto u = solve_even(data, p, cfg);
      REQUIRE(u(Point(n), 1.2) == Approx(c * 1.2).margin(1e-6));
    }
  }
}

TEST_CASE("single-mode data matches the oracle") {
  SECTION("n = 3, |k| = sqrt(3), a = 2, b = 1") {
    const auto p = make_params(2.0, 1.0, 3);
    const auto phi0 = ScalarField::harmonic(Point{1.0, 1.0, 1.0}, 1.0, 0.0);
    const auto data = make_initial_data(phi0, ScalarField::zero(3), ScalarField::zero(3),
                                        ScalarField::zero(3));
    const auto u = solve_odd(data, p, smoke_config(3));
    const auto oracle = oracle_solution(data, p);
    const Point x{1.0, 0.0, 0.0};
    REQUIRE_THAT(u(x, 0.7), Catch::Matchers::WithinAbs(oracle(x, 0.7), 1e-4));
  }
  SECTION("n = 2, product of sines") {
    const auto p = make_params(1.0, 0.5, 2);
    const auto phi0 =
        ScalarField::trig_sum({ScalarField::harmonic(Point{1.0, -1.0}, 0.5, 0.0),
                               ScalarField::harmonic(Point{1.0, 1.0}, -0.5, 0.0)});
    const auto data = make_initial_data(phi0, ScalarField::zero(2), ScalarField::zero(2),
                                        ScalarField::zero(2));
    const auto u = solve_even(data, p, smoke_config(2));
    const auto oracle = oracle_solution(data, p);
    const Point x{kPi / 2, kPi / 2};
    REQUIRE_THAT(u(x, 0.9), Catch::Matchers::WithinAbs(oracle(x, 0.9), 1e-4));
  }
}

TEST_CASE("random data agrees with the oracle (unit-sized sample)") {
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> tdist(0.1, 2.0);
  for (int n : {1, 2, 3}) {
    const auto p = make_params(1.0, 0.5, n);
    for (int ds = 0; ds < 2; ++ds) {
      const auto data = testing::random_data(rng, n, 3);
      const double scale = 1.0 + testing::amplitude_scale(data);
      const auto u = solve_homogeneous(data, p, smoke_config(n));
      const auto oracle = oracle_solution(data, p);
      for (int probe = 0; probe < 4; ++probe) {
        const Point x = testing::random_point(rng, n);
        const double t = tdist(rng);
        REQUIRE_THAT(u(x, t), Catch::Matchers::WithinAbs(oracle(x, t), 1e-4 * scale));
      }
    }
  }
}

TEST_CASE("highest supported dimensions: each data channel vs the oracle") {
  // n = 6 and 7 run the doubly-nested radial stencil (m = 2); a single
  // mode per channel pins the prefactors, powers and signs there
  for (int n : {6, 7}) {
    const auto p = make_params(1.0, 0.5, n);
    SolverConfig cfg;
    cfg.sphere_level = 2;
    cfg.profile_nodes = 20;
    Point k(n);
    k[0] = 1.0;
    k[2] = 1.0;
    k[n - 1] = -1.0;
    Point x(n);
    x[0] = 0.3;
    x[1] = -0.2;
    x[3] = 0.7;
    for (int channel = 0; channel < 4; ++channel) {
      InitialData data = InitialData::zero(n);
      const auto f = ScalarField::harmonic(k, 0.8, -0.4);
      (channel == 0   ? data.phi0
       : channel == 1 ? data.phi1
       : channel == 2 ? data.phi2
                      : data.phi3) = f;
      const auto u = n % 2 ? solve_odd(data, p, cfg) : solve_even(data, p, cfg);
      const auto oracle = oracle_solution(data, p);
      for (double t : {0.6, 1.4}) {
        INFO("n = " << n << " channel = " << channel << " t = " << t);
        REQUIRE_THAT(u(x, t), Catch::Matchers::WithinAbs(oracle(x, t), 1e-4));
      }
    }
  }
}

TEST_CASE("gaussian data run through the mean-based solver") {
  // no per-mode oracle for a gaussian; the discrete operator residual and
  // the initial-condition probes stand in
  const auto p = make_params(1.0, 0.5, 2);
  SolverConfig cfg;
  cfg.sphere_level = 4;
  const auto bump = ScalarField::gaussian(Point{0.2, -0.1}, 1.5);
  const auto data = make_initial_data(bump, ScalarField::zero(2), ScalarField::zero(2),
                                      ScalarField::zero(2));
  const auto u = solve_even(data, p, cfg);
  const std::vector<std::pair<Point, double>> probes{{Point{0.3, 0.1}, 0.6},
                                                     {Point{-0.4, 0.5}, 1.1}};
  CHECK(biwave_residual(u, probes, 1e-2).relative < 1e-3);
  const std::vector<Point> pts{Point{0.0, 0.0}, Point{0.5, -0.3}};
  for (int k = 0; k <= 3; ++k)
    REQUIRE(initial_probe(u, data, k, 1e-4, pts, 6e-3) < 1e-3);
}

TEST_CASE("n = 5 random mode agrees with the oracle") {
  std::mt19937 rng(5);
  const auto p = make_params(1.0, 0.5, 5);
  const auto data = testing::random_data(rng, 5, 2);
  const double scale = 1.0 + testing::amplitude_scale(data);
  const auto u = solve_odd(data, p, smoke_config(5));
  const auto oracle = oracle_solution(data, p);
  const Point x = testing::random_point(rng, 5, 1.5);
  for (double t : {0.4, 1.6})
    REQUIRE_THAT(u(x, t), Catch::Matchers::WithinAbs(oracle(x, t), 1e-4 * scale));
}

TEST_CASE("initial conditions are recovered by forward probes") {
  std::mt19937 rng(808);
  std::vector<Point> pts;
  for (int i = 0; i < 3; ++i) pts.push_back(testing::random_point(rng, 1, 1.5));
  const auto p = make_params(1.0, 0.5, 1);
  const auto data = make_initial_data(
      ScalarField::harmonic(Point{1.0}, 0.4, 0.0), ScalarField::harmonic(Point{1.0}, 0.0, 1.0),
      ScalarField::harmonic(Point{1.0}, 1.0, 0.0), ScalarField::harmonic(Point{1.0}, 0.0, -0.3));
  const auto u = solve_1d(data, p);
  const double anchor = 10.0 * SolverConfig{}.t_eps;
  for (int k = 0; k <= 3; ++k) {
    const double dev = initial_probe(u, data, k, anchor, pts, 6e-3);
    INFO("k = " << k);
    REQUIRE(dev < 1e-3);
  }
}

TEST_CASE("initial conditions for the mean-based solvers") {
  std::mt19937 rng(809);
  const double anchor = 10.0 * SolverConfig{}.t_eps;
  for (int n : {2, 3}) {
    std::vector<Point> pts;
    for (int i = 0; i < 2; ++i) pts.push_back(testing::random_point(rng, n, 1.0));
    const auto p = make_params(1.0, 0.5, n);
    const auto data = testing::random_data(rng, n, 2);
    const auto u = solve_homogeneous(data, p, smoke_config(n));
    for (int k = 0; k <= 3; ++k) {
      const double dev = initial_probe(u, data, k, anchor, pts, 6e-3);
      INFO("n = " << n << " k = " << k);
      REQUIRE(dev < 1e-3);
    }
  }
}

TEST_CASE("pure-speed projection") {
  SECTION("cos(x), a = 2: phi2 = -4 cos(x)") {
    const auto p = make_params(2.0, 1.0, 1);
    const auto d = pure_speed_data(p, ScalarField::harmonic(Point{1.0}, 1.0, 0.0),
                                   ScalarField::zero(1));
    CHECK(d.phi2(Point{0.0}) == Approx(-4.0).margin(1e-14));
    CHECK(d.phi3.is_zero());
  }
  SECTION("zero data stay zero") {
    const auto p = make_params(1.0, 0.5, 2);
    const auto d = pure_speed_data(p, ScalarField::zero(2), ScalarField::zero(2));
    CHECK(d.phi2.is_zero());
    CHECK(d.phi3.is_zero());
  }
  SECTION("cos(x1 + x2), a = 1: phi2 = -2 cos(x1 + x2)") {
    const auto p = make_params(1.0, 0.7, 2);
    const auto d = pure_speed_data(p, ScalarField::harmonic(Point{1.0, 1.0}, 1.0, 0.0),
                                   ScalarField::zero(2));
    CHECK(d.phi2(Point{0.0, 0.0}) == Approx(-2.0).margin(1e-14));
  }
  SECTION("non-trig input is rejected") {
    const auto p = make_params(1.0, 0.5, 1);
    const auto g = ScalarField::gaussian(Point{0.0}, 1.0);
    CHECK_THROWS_AS(pure_speed_data(p, g, ScalarField::zero(1)), Error);
  }
}

TEST_CASE("pure-speed reduction to the d'Alembert formula") {
  std::mt19937 rng(606);
  const auto p = make_params(1.4, 0.6, 1);
  const auto phi0 = testing::random_trig_field(rng, 1, 3, 3.0, false);
  const auto phi1 = testing::random_trig_field(rng, 1, 3, 3.0, false);
  const auto data = pure_speed_data(p, phi0, phi1);
  const auto u = solve_1d(data, p);
  auto dalembert = [&](double x, double t) {
    const double travel = 0.5 * (phi0(Point{x + p.a * t}) + phi0(Point{x - p.a * t}));
    const double drift =
        integrate_interval([&](double y) { return phi1(Point{y}); }, x - p.a * t, x + p.a * t,
                           48) /
        (2.0 * p.a);
    return travel + drift;
  };
  for (double x : {-1.5, 0.2, 2.4})
    for (double t : {0.3, 1.1, 1.9})
      REQUIRE_THAT(u(Point{x}, t), Catch::Matchers::WithinAbs(dalembert(x, t), 1e-6));
}

TEST_CASE("solvers are linear") {
  std::mt19937 rng(707);
  const auto p = make_params(1.0, 0.5, 2);
  const auto d1 = testing::random_data(rng, 2, 2);
  const auto d2 = testing::random_data(rng, 2, 2);
  const double al = 0.7, be = -1.3;
  InitialData combo = InitialData::zero(2);
  for (int i = 0; i < 4; ++i) {
    auto& target = i == 0 ? combo.phi0 : i == 1 ? combo.phi1 : i == 2 ? combo.phi2 : combo.phi3;
    target = ScalarField::trig_sum({d1.phi(i).scaled(al), d2.phi(i).scaled(be)});
  }
  const auto cfg = smoke_config(2);
  const auto u1 = solve_even(d1, p, cfg);
  const auto u2 = solve_even(d2, p, cfg);
  const auto uc = solve_even(combo, p, cfg);
  for (int probe = 0; probe < 5; ++probe) {
    const Point x = testing::random_point(rng, 2);
    const double t = 0.2 + 0.35 * probe;
    REQUIRE_THAT(uc(x, t),
                 Catch::Matchers::WithinAbs(al * u1(x, t) + be * u2(x, t), 1e-10));
  }
}

TEST_CASE("translation equivariance") {
  std::mt19937 rng(909);
  const auto p = make_params(1.0, 0.5, 2);
  const auto data = testing::random_data(rng, 2, 2);
  const Point shift{0.6, -1.1};
  InitialData shifted = InitialData::zero(2);
  for (int i = 0; i < 4; ++i) {
    std::vector<TrigMode> modes;
    for (const auto& m : data.phi(i).modes())
      // e^{ik.(x+delta)} = e^{ik.delta} e^{ik.x}
      modes.push_back({m.k, m.amp * std::exp(std::complex<double>(0.0, dot(m.k, shift)))});
    auto f = modes.empty() ? ScalarField::zero(2) : ScalarField::trig(2, std::move(modes));
    (i == 0 ? shifted.phi0 : i == 1 ? shifted.phi1 : i == 2 ? shifted.phi2 : shifted.phi3) = f;
  }
  const auto cfg = smoke_config(2);
  const auto u = solve_even(data, p, cfg);
  const auto us = solve_even(shifted, p, cfg);
  for (int probe = 0; probe < 5; ++probe) {
    const Point x = testing::random_point(rng, 2);
    const Point xs = axpy(x, 1.0, shift);
    const double t = 0.25 + 0.3 * probe;
    REQUIRE_THAT(us(x, t), Catch::Matchers::WithinAbs(u(xs, t), 1e-10));
  }
}

TEST_CASE("dimension and parity preconditions") {
  const auto d3 = InitialData::zero(3);
  CHECK_THROWS_AS(solve_1d(d3, make_params(1.0, 0.5, 3)), Error);
  CHECK_THROWS_AS(solve_odd(InitialData::zero(2), make_params(1.0, 0.5, 2)), Error);
  CHECK_THROWS_AS(solve_even(d3, make_params(1.0, 0.5, 3)), Error);
  CHECK_THROWS_AS(solve_odd(InitialData::zero(3), make_params(1.0, 0.5, 2)), Error);
}

TEST_CASE("small-time proxy keeps the evaluator total at t = 0") {
  const auto p = make_params(1.0, 0.5, 3);
  const auto data = make_initial_data(
      ScalarField::harmonic(Point{1.0, 0.0, 0.0}, 0.7, 0.0), ScalarField::zero(3),
      ScalarField::zero(3), ScalarField::zero(3));
  const auto u = solve_odd(data, p, smoke_config(3));
  const Point x{0.2, 0.0, 0.0};
  CHECK(u(x, 0.0) == data.phi0(x));
  CHECK(std::isfinite(u(x, 5e-7)));
}
