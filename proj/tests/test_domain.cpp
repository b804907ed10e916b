#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "liou/domain.hpp"

using namespace liou;

TEST_CASE("interval union ordering is enforced") {
  CHECK_NOTHROW(IntervalUnion({{-1.0, 1.0}}));
  CHECK_NOTHROW(IntervalUnion({{-2.0, -1.0}, {1.0, 2.0}}));
  CHECK_THROWS_AS(IntervalUnion({{1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(IntervalUnion({{-1.0, 1.0}, {0.5, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(IntervalUnion({}), std::invalid_argument);
}

TEST_CASE("diameter, membership, distance") {
  IntervalUnion I({{-2.0, -1.0}, {1.0, 3.0}});
  CHECK(I.diameter() == 3.0);
  CHECK(I.contains(-1.5));
  CHECK(!I.contains(0.0));
  CHECK(!I.contains(-1.0));  // endpoints are exterior
  CHECK(I.dist_to_complement(2.0) == doctest::Approx(1.0));
  CHECK(I.dist_to_complement(0.0) == 0.0);
  CHECK(I.measure() == doctest::Approx(3.0));
}

TEST_CASE("flat serialization round-trips") {
  IntervalUnion I({{-2.0, -1.0}, {1.0, 2.0}});
  IntervalUnion J = IntervalUnion::from_string(I.to_string());
  CHECK(J.components() == 2);
  CHECK(J.component(1).first == 1.0);
  CHECK_THROWS_AS(IntervalUnion::from_string("1,0"), std::invalid_argument);
  CHECK_THROWS_AS(IntervalUnion::from_string("1"), std::invalid_argument);
}

TEST_CASE("expand_domain scales endpoints") {
  IntervalUnion I({{-1.0, 1.0}});
  IntervalUnion I2 = expand_domain(I, 0.5);
  CHECK(I2.component(0).first == doctest::Approx(-2.0));
  CHECK(I2.component(0).second == doctest::Approx(2.0));

  IntervalUnion J({{-2.0, -1.0}, {1.0, 2.0}});
  IntervalUnion J10 = expand_domain(J, 0.1);
  CHECK(J10.component(0).first == doctest::Approx(-20.0));
  CHECK(J10.component(1).second == doctest::Approx(20.0));

  IntervalUnion Jid = expand_domain(J, 1.0);
  CHECK(Jid.component(0).first == J.component(0).first);

  CHECK_THROWS_AS(expand_domain(I, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(expand_domain(I, -1.0), std::invalid_argument);
}

TEST_CASE("expand round trip returns the original endpoints") {
  IntervalUnion I({{-2.3, -1.1}, {0.7, 2.9}});
  for (double eps : {0.37, 0.05, 0.011}) {
    IntervalUnion back = expand_domain(expand_domain(I, eps), 1.0 / eps);
    for (int k = 0; k < I.components(); ++k) {
      CHECK(back.component(k).first ==
            doctest::Approx(I.component(k).first).epsilon(1e-12));
      CHECK(back.component(k).second ==
            doctest::Approx(I.component(k).second).epsilon(1e-12));
    }
  }
}

TEST_CASE("grid covers the window with an odd node count") {
  IntervalUnion I({{-1.0, 1.0}});
  Grid g = Grid::cover(I, 1e-2, 3.0);
  CHECK(g.n() % 2 == 1);
  CHECK(g.a() == doctest::Approx(-4.0));
  CHECK(g.b() == doctest::Approx(4.0));
  // nodes cover the window exactly
  CHECK(g.node(g.n() - 1) == doctest::Approx(g.b()).epsilon(1e-12));
  // every domain endpoint lies within h/2 of some node
  for (double e : {-1.0, 1.0}) {
    const int i = g.nearest(e);
    CHECK(std::abs(g.node(i) - e) <= 0.5 * g.h() + 1e-15);
  }
}

TEST_CASE("grid function interpolation is exact at nodes and cubic between") {
  Grid g(-2.0, 2.0, 201);
  GridFunction f = GridFunction::sample(g, [](double x) { return std::sin(1.7 * x); });
  CHECK(f(g.node(37)) == doctest::Approx(f.value(37)).epsilon(1e-15));
  CHECK(f(0.1234) == doctest::Approx(std::sin(1.7 * 0.1234)).epsilon(1e-6));
  CHECK(f(5.0) == doctest::Approx(std::sin(1.7 * 5.0)));  // analytic closure outside
}

TEST_CASE("tail models evaluate and integrate") {
  TailModel tm{1.5, -2.0, 0.7, 2.0, 0.3};
  CHECK(tm.eval(10.3) ==
        doctest::Approx(1.5 - 2.0 * std::log(10.0) + 0.7 * std::pow(10.0, -2.0)));

  // tail integral of a constant: int_Z^inf c/z^2 = c/Z
  ExteriorClosure c = ExteriorClosure::constant(3.0);
  CHECK(c.tail_integral(0.0, 5.0, +1) == doctest::Approx(3.0 / 5.0).epsilon(1e-13));

  // log tail against closed form, centered
  ExteriorClosure lg = ExteriorClosure::tails({0, 1, 0, 1, 0}, {0, 1, 0, 1, 0});
  const double Z = 7.0;
  CHECK(lg.tail_integral(0.0, Z, +1) ==
        doctest::Approx((std::log(Z) + 1.0) / Z).epsilon(1e-12));

  // algebraic tail p=2, w=0: int_Z^inf z^-2/z^2 = 1/(3 Z^3)
  ExteriorClosure alg = ExteriorClosure::tails({0, 0, 1, 2, 0}, {0, 0, 1, 2, 0});
  CHECK(alg.tail_integral(0.0, 4.0, +1) ==
        doctest::Approx(1.0 / (3.0 * 64.0)).epsilon(1e-10));

  // analytic closure agrees with the model on the same function
  ExteriorClosure an = ExteriorClosure::analytic([](double x) { return std::log(std::abs(x)); });
  CHECK(an.tail_integral(0.0, Z, +1) ==
        doctest::Approx((std::log(Z) + 1.0) / Z).epsilon(1e-9));
}

TEST_CASE("kappa fields") {
  KappaField k1 = KappaField::constant(2.5);
  CHECK(k1(0.3) == 2.5);
  CHECK(k1.deriv(0.3) == 0.0);

  KappaField k2 = KappaField::polynomial({1.0, 0.5, -0.25});
  CHECK(k2(2.0) == doctest::Approx(1.0 + 1.0 - 1.0));
  CHECK(k2.deriv(2.0) == doctest::Approx(0.5 - 1.0));

  KappaField k3 = KappaField::tabulated({0.0, 1.0, 2.0}, {1.0, 3.0, 2.0});
  CHECK(k3(0.5) == doctest::Approx(2.0));
  CHECK(k3(1.5) == doctest::Approx(2.5));

  IntervalUnion I({{-1.0, 1.0}});
  CHECK_THROWS_AS(KappaField::polynomial({0.0, 1.0}).validate_positive(I),
                  std::invalid_argument);
  CHECK_NOTHROW(KappaField::constant(0.1).validate_positive(I));
}

TEST_CASE("config point admissibility") {
  IntervalUnion I({{-2.0, -1.0}, {1.0, 2.0}});
  CHECK(ConfigPoint{{-1.5, 1.5}, 0.3}.admissible(I));
  CHECK(!ConfigPoint{{-1.5, -1.4}, 0.3}.admissible(I));  // pairwise too close
  CHECK(!ConfigPoint{{-1.05, 1.5}, 0.3}.admissible(I));  // too near the boundary
  CHECK_THROWS_AS((ConfigPoint{{0.0}, 0.3}).validate(I), std::invalid_argument);
}

TEST_CASE("star norm: zero function") {
  IntervalUnion I({{-1.0, 1.0}});
  const double eps = 0.1;
  IntervalUnion Ieps = expand_domain(I, eps);
  Grid g = Grid::cover(Ieps, 0.05, 3.0);
  CHECK(star_norm(GridFunction::zeros(g), Ieps, 0.25, {0.0}, eps) == 0.0);
}

TEST_CASE("star norm: pure weight profile attains 1/(1+eps)") {
  const double sigma = 0.4, eps = 0.05;
  IntervalUnion Ieps = expand_domain(IntervalUnion({{-1.0, 1.0}}), eps);
  Grid g = Grid::cover(Ieps, 0.01, 3.0);
  const double eta = 0.0;
  GridFunction f = GridFunction::sample(
      g, [&](double y) { return std::pow(1.0 + std::abs(y - eta), -1.0 - sigma); });
  // ratio maximized where the profile peaks: f/(eps + f) = 1/(1 + eps) at y = eta
  CHECK(star_norm(f, Ieps, sigma, {eta}, eps) ==
        doctest::Approx(1.0 / (1.0 + eps)).epsilon(1e-10));
}

TEST_CASE("star norm: constants see the eps floor far out") {
  const double sigma = 0.25, eps = 1e-3;
  IntervalUnion Ieps = expand_domain(IntervalUnion({{-1.0, 1.0}}), eps);
  Grid g = Grid::cover(Ieps, 5.0, 3.0);
  const double c = 0.7;
  GridFunction f = GridFunction::sample(g, [&](double) { return c; });
  const double ns = star_norm(f, Ieps, sigma, {0.0}, eps);
  // far nodes see weight eps + (1+|y|)^{-1-sigma} ~ eps
  const double ymax = 1.0 / eps;
  const double floor = eps + std::pow(1.0 + ymax * 0.9, -1.0 - sigma);
  CHECK(ns > 0.9 * c / floor);
  CHECK(ns <= c / eps);
}

TEST_CASE("star norm homogeneity and monotonicity") {
  const double sigma = 0.3, eps = 0.05;
  IntervalUnion Ieps = expand_domain(IntervalUnion({{-1.0, 1.0}}), eps);
  Grid g = Grid::cover(Ieps, 0.05, 3.0);
  std::mt19937_64 rng(123);
  std::normal_distribution<double> dist;
  Eigen::VectorXd a(g.n()), b(g.n());
  for (int i = 0; i < g.n(); ++i) {
    a[i] = dist(rng);
    b[i] = std::copysign(std::abs(a[i]) + 0.1, a[i]);  // pointwise |a| <= |b|
  }
  GridFunction fa(g, a, ExteriorClosure::zero());
  GridFunction fb(g, b, ExteriorClosure::zero());
  std::vector<double> eta = {0.0};
  for (double t : {-3.0, 0.25, 7.5}) {
    GridFunction ft(g, t * a, ExteriorClosure::zero());
    CHECK(star_norm(ft, Ieps, sigma, eta, eps) ==
          doctest::Approx(std::abs(t) * star_norm(fa, Ieps, sigma, eta, eps)).epsilon(1e-12));
  }
  CHECK(star_norm(fa, Ieps, sigma, eta, eps) <= star_norm(fb, Ieps, sigma, eta, eps));
}

TEST_CASE("star norm reports an unresolved domain") {
  IntervalUnion tiny({{0.4, 0.6}});
  Grid g(-10.0, 10.0, 11);  // spacing 2: no node falls inside (0.4, 0.6)
  GridFunction f = GridFunction::zeros(g);
  CHECK_THROWS_WITH_AS(star_norm(f, tiny, 0.25, {0.5}, 0.1), "domain unresolved at this eps/h",
                       std::runtime_error);
}
