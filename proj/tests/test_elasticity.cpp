#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "biwave/biwave.hpp"
#include "helpers.hpp"

using namespace biwave;
using Catch::Approx;

namespace {

VectorFieldEvaluator::Component zero_comp() {
  return [](const Point&, double) { return 0.0; };
}

}  // namespace

TEST_CASE("lame_to_speeds") {
  SECTION("lambda = 0, mu = 1, rho = 1") {
    const auto p = lame_to_speeds(ElasticParams{0.0, 1.0, 1.0}, 3);
    CHECK(p.a == Approx(std::sqrt(2.0)));
    CHECK(p.b == Approx(1.0));
  }
  SECTION("lambda = 2, mu = 1, rho = 4") {
    const auto p = lame_to_speeds(ElasticParams{2.0, 1.0, 4.0}, 3);
    CHECK(p.a == Approx(1.0));
    CHECK(p.b == Approx(0.5));
  }
  SECTION("lambda + mu <= 0 is rejected") {
    CHECK_THROWS_AS(lame_to_speeds(ElasticParams{-1.0, 0.4, 1.0}, 3), Error);
    CHECK_THROWS_AS(make_elastic_params(0.0, -1.0, 1.0), Error);
    CHECK_THROWS_AS(make_elastic_params(0.0, 1.0, 0.0), Error);
  }
  SECTION("round trip: a^2 - b^2 = (lambda + mu)/rho") {
    for (double lambda : {0.1, 1.7, 4.0})
      for (double mu : {0.3, 2.0})
        for (double rho : {0.5, 3.0}) {
          const auto p = lame_to_speeds(ElasticParams{lambda, mu, rho}, 3);
          REQUIRE(p.speed_gap() == Approx((lambda + mu) / rho).margin(1e-12));
        }
  }
}

TEST_CASE("cks_displacement") {
  const auto p = make_params(1.0, 0.5, 3);
  SECTION("zero potential") {
    const auto u = cks_displacement(VectorFieldEvaluator::zero(3), p, 1e-2);
    CHECK(u(0, Point{0.1, 0.2, 0.3}, 0.5) == 0.0);
    CHECK(u(2, Point{0.1, 0.2, 0.3}, 0.5) == 0.0);
  }
  SECTION("plane wave along x1") {
    // w = (cos(x1 - a t), 0, 0): the fast factor annihilates w, so
    // u = (a^2 - b^2) grad div w = -(a^2 - b^2) cos(x1 - a t) e1
    VectorFieldEvaluator w(
        3, {[&](const Point& x, double t) { return std::cos(x[0] - p.a * t); }, zero_comp(),
            zero_comp()});
    const auto u = cks_displacement(w, p, 1e-2);
    const Point x{0.4, 0.1, -0.3};
    const double t = 0.9;
    CHECK(u(0, x, t) == Approx(-p.speed_gap() * std::cos(x[0] - p.a * t)).margin(1e-7));
    CHECK(u(1, x, t) == Approx(0.0).margin(1e-9));
  }
  SECTION("x-independent potential: u = w''") {
    VectorFieldEvaluator w(3, {[](const Point&, double t) { return t * t * t; },
                               [](const Point&, double t) { return std::sin(t); }, zero_comp()});
    const auto u = cks_displacement(w, p, 1e-2);
    const Point x{1.0, -1.0, 0.5};
    CHECK(u(0, x, 1.3) == Approx(6.0 * 1.3).margin(1e-7));
    CHECK(u(1, x, 1.3) == Approx(-std::sin(1.3)).margin(1e-7));
  }
}

TEST_CASE("navier_residual") {
  const auto ep = make_elastic_params(2.0, 1.0, 4.0);
  SECTION("zero displacement, zero forcing") {
    const auto u = VectorFieldEvaluator::zero(3);
    const std::vector<std::pair<Point, double>> probes{{Point{0.0, 0.0, 0.0}, 0.5}};
    const auto rep = navier_residual(u, nullptr, ep, probes, 1e-2);
    CHECK(rep.max_abs < 1e-12);
  }
  SECTION("rigid translation") {
    VectorFieldEvaluator u(3, {[](const Point&, double) { return 0.4; },
                               [](const Point&, double) { return -1.0; },
                               [](const Point&, double) { return 2.0; }});
    const std::vector<std::pair<Point, double>> probes{{Point{0.3, -0.2, 0.8}, 0.7}};
    const auto rep = navier_residual(u, nullptr, ep, probes, 1e-2);
    CHECK(rep.max_abs < 1e-10);
  }
}

TEST_CASE("reconstructed displacement satisfies the elastodynamic equation") {
  // potential component from the scalar solver; the identity
  // (d_tt - b^2 lap) CKS(w) - (a^2-b^2) grad div CKS(w) = 0 holds exactly,
  // the discrete check composes two stencil stages
  const auto ep = make_elastic_params(2.0, 1.0, 4.0);
  const auto p = lame_to_speeds(ep, 3);
  SolverConfig cfg;
  cfg.sphere_level = 4;
  const auto data = make_initial_data(ScalarField::harmonic(Point{1.0, 0.0, 1.0}, 0.8, 0.0),
                                      ScalarField::harmonic(Point{0.0, 1.0, 0.0}, 0.0, 0.5),
                                      ScalarField::zero(3), ScalarField::zero(3));
  const auto w1 = solve_odd(data, p, cfg);
  const SolutionEvaluator zero_sol(p, SolutionEvaluator::Provenance::synthetic,
                                   [](const Point&, double) { return 0.0; });
  const std::vector<SolutionEvaluator> comps{w1, zero_sol, zero_sol};
  const double h = 1e-2;
  const auto w = VectorFieldEvaluator::from_solutions(comps).memoized(h / 64.0);
  const auto u = cks_displacement(w, p, h);
  const std::vector<std::pair<Point, double>> probes{{Point{0.3, -0.2, 0.5}, 0.8},
                                                     {Point{-0.6, 0.4, 0.1}, 1.3}};
  const auto rep = navier_residual(u, nullptr, ep, probes, h);
  INFO("max " << rep.max_abs << " scale " << rep.scale);
  CHECK(rep.relative < 1e-2);
}
