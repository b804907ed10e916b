#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "liou/ansatz.hpp"
#include "liou/greens.hpp"
#include "liou/reduced.hpp"

using namespace liou;

TEST_CASE("reduced energy closed-form pins on (-1,1)") {
  GreenTable gt(IntervalUnion({{-1.0, 1.0}}));
  KappaField one = KappaField::constant(1.0);
  CHECK(xi_energy({0.0}, one, gt) == doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-13));
  for (double xi : {0.25, -0.7}) {
    CHECK(xi_energy({xi}, one, gt) ==
          doctest::Approx(-2.0 * std::log(2.0 * (1.0 - xi * xi))).epsilon(1e-13));
  }
  // Robin blow-up drives Xi to +inf at the boundary
  CHECK(xi_energy({0.9999}, one, gt) > 15.0);
  // coincident points give the -inf sentinel
  CHECK(xi_energy({0.2, 0.2}, one, gt) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("swap symmetry on a symmetric two-interval domain") {
  auto gt = std::make_shared<GreenTable>(IntervalUnion({{-2.0, -1.0}, {1.0, 2.0}}));
  KappaField one = KappaField::constant(1.0);
  CHECK(xi_energy({-1.5, 1.5}, one, *gt) ==
        doctest::Approx(xi_energy({1.5, -1.5}, one, *gt)).epsilon(1e-12));
  CHECK(xi_energy({-1.3, 1.6}, one, *gt) ==
        doctest::Approx(xi_energy({-1.6, 1.3}, one, *gt)).epsilon(1e-6));
}

TEST_CASE("adding a constant to log kappa shifts Xi by -2 m c exactly") {
  GreenTable gt(IntervalUnion({{-1.0, 1.0}}));
  const double c = 0.37;
  KappaField k1 = KappaField::constant(1.0);
  KappaField k2 = KappaField::constant(std::exp(c));
  const std::vector<double> xi = {0.3};
  CHECK(xi_energy(xi, k2, gt) ==
        doctest::Approx(xi_energy(xi, k1, gt) - 2.0 * 1 * c).epsilon(1e-12));
}

TEST_CASE("finite-difference gradient matches the analytic closed form") {
  GreenTable gt(IntervalUnion({{-1.0, 1.0}}));
  KappaField one = KappaField::constant(1.0);
  for (double xi : {0.2, -0.5}) {
    const double h = 1e-6;
    const double fd =
        (xi_energy({xi + h}, one, gt) - xi_energy({xi - h}, one, gt)) / (2.0 * h);
    const double analytic = 4.0 * xi / (1.0 - xi * xi);  // d/dxi of -2 log(2(1-xi^2))
    CHECK(fd == doctest::Approx(analytic).epsilon(1e-4));
  }
}

TEST_CASE("minimize_xi: symmetric interval pins the origin") {
  auto gt = std::make_shared<GreenTable>(IntervalUnion({{-1.0, 1.0}}));
  KappaField one = KappaField::constant(1.0);
  IntervalUnion I({{-1.0, 1.0}});
  XiLandscape land(I, one, gt, {0}, 0.004);
  ConfigPoint hat = minimize_xi(land, 1e-9, 0.3);
  CHECK(std::abs(hat.xi[0]) < 1e-6);
  CHECK(land.min_value() == doctest::Approx(-2.0 * std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("minimize_xi: generic interval pins the midpoint") {
  IntervalUnion I({{0.37, 1.81}});
  auto gt = std::make_shared<GreenTable>(I);
  KappaField one = KappaField::constant(1.0);
  XiLandscape land(I, one, gt, {0}, 0.004);
  ConfigPoint hat = minimize_xi(land, 1e-9, 0.3);
  CHECK(hat.xi[0] == doctest::Approx(1.09).epsilon(1e-6));
}

TEST_CASE("minimize_xi: symmetric two-interval pair is symmetric") {
  IntervalUnion I({{-2.0, -1.0}, {1.0, 2.0}});
  auto gt = std::make_shared<GreenTable>(I);
  KappaField one = KappaField::constant(1.0);
  XiLandscape land(I, one, gt, {0, 1}, 0.004);
  ConfigPoint hat = minimize_xi(land, 1e-8, 0.3);
  CHECK(hat.xi[0] == doctest::Approx(-hat.xi[1]).epsilon(1e-5));
  CHECK(hat.xi[0] < -1.0);
  CHECK(hat.xi[1] > 1.0);
}

TEST_CASE("global kappa rescaling moves the value, not the minimizer") {
  IntervalUnion I({{0.37, 1.81}});
  auto gt = std::make_shared<GreenTable>(I);
  KappaField k2 = KappaField::constant(4.2);
  XiLandscape land(I, k2, gt, {0}, 0.004);
  ConfigPoint hat = minimize_xi(land, 1e-9, 0.3);
  CHECK(hat.xi[0] == doctest::Approx(1.09).epsilon(1e-6));
  CHECK(land.min_value() ==
        doctest::Approx(-2.0 * std::log(1.44) - 2.0 * std::log(4.2)).epsilon(1e-8));
}

TEST_CASE("landscape tabulation and box constraints") {
  IntervalUnion I({{-1.0, 1.0}});
  auto gt = std::make_shared<GreenTable>(I);
  KappaField one = KappaField::constant(1.0);
  XiLandscape land(I, one, gt, {0}, 0.1);
  land.tabulate(17);
  CHECK(land.cache().size() == 17);
  CHECK(land.cache().front().size() == 2);
  CHECK(land({0.0}) == doctest::Approx(-2.0 * std::log(2.0)));
  CHECK(land({0.95}) == std::numeric_limits<double>::infinity());  // outside Q_delta
  CHECK_THROWS_AS(XiLandscape(I, one, gt, {2}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(XiLandscape(I, one, gt, {0}, 1.5), std::invalid_argument);
}

TEST_CASE("J(0) = -eps |I| up to the end-cell coverage") {
  IntervalUnion I({{-1.0, 1.0}});
  Grid gx = Grid::cover(I, 1e-3, 3.0);
  KappaField one = KappaField::constant(1.0);
  const double J0 = full_energy(GridFunction::zeros(gx), 0.1, one, I);
  CHECK(J0 == doctest::Approx(-0.2).epsilon(2.0 * gx.h()));
}

TEST_CASE("energy expansion: J(U) + 2 pi m (1 + log eps) - pi Xi -> 0 like eps log") {
  GreenTable gt(IntervalUnion({{-1.0, 1.0}}));
  KappaField one = KappaField::constant(1.0);
  const double Xi0 = -2.0 * std::log(2.0);
  double prev = 1e300;
  for (double eps : {0.1, 0.05, 0.025}) {
    BlowupConfig cfg;
    cfg.domain = IntervalUnion({{-1.0, 1.0}});
    cfg.xi = ConfigPoint{{0.0}, 0.3};
    cfg.eps = eps;
    Grid gy = make_expanded_grid(cfg);
    DirichletSystem ysys(expand_domain(cfg.domain, eps), gy);
    AnsatzBundle b = build_bundle(cfg, ysys, gt);
    Grid gx = Grid::cover(cfg.domain, 2e-3, 3.0);
    const double J = full_energy(b.U_field(gx), eps, one, cfg.domain);
    const double theta2 =
        J + 2.0 * std::numbers::pi * (1.0 + std::log(eps)) - std::numbers::pi * Xi0;
    CHECK(std::abs(theta2) < 8.0 * eps * std::abs(std::log(eps)));
    CHECK(std::abs(theta2) < prev);
    prev = std::abs(theta2);
  }
}

TEST_CASE("nelder-mead minimizes a shifted quadratic inside a box") {
  auto f = [](const std::vector<double>& x) {
    const double a = x[0] - 0.3, b = x[1] + 0.4;
    return 2.0 * a * a + (a + b) * (a + b);
  };
  auto x = nelder_mead(f, {0.0, 0.0}, {{-1.0, 1.0}, {-1.0, 1.0}}, 1e-10, 600, 1);
  CHECK(x[0] == doctest::Approx(0.3).epsilon(1e-4));
  CHECK(x[1] == doctest::Approx(-0.4).epsilon(1e-4));
}
