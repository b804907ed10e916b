#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "liou/ansatz.hpp"
#include "liou/greens.hpp"
#include "liou/verify.hpp"

using namespace liou;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("mass of the zero function is eps int kappa") {
  IntervalUnion I({{-1.0, 1.0}});
  Grid g = Grid::cover(I, 1e-3, 3.0);
  KappaField k = KappaField::polynomial({2.0, 0.0, 1.0});  // int over (-1,1) = 4 + 2/3
  const double expected = 0.1 * (4.0 + 2.0 / 3.0);
  CHECK(mass(GridFunction::zeros(g), 0.1, k, I) == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("mass is stable under grid refinement") {
  IntervalUnion I({{-1.0, 1.0}});
  KappaField one = KappaField::constant(1.0);
  auto u = [](double x) { return 1.0 / (1.0 + 4.0 * x * x); };
  Grid g1 = Grid::cover(I, 2e-3, 3.0), g2 = Grid::cover(I, 1e-3, 3.0);
  const double m1 = mass(GridFunction::sample(g1, u), 0.2, one, I);
  const double m2 = mass(GridFunction::sample(g2, u), 0.2, one, I);
  CHECK(std::abs(m1 - m2) < 1e-6);
}

TEST_CASE("expanded-variable mass of a single bundle approaches 2 pi") {
  BlowupConfig cfg;
  cfg.domain = IntervalUnion({{-1.0, 1.0}});
  cfg.xi = ConfigPoint{{0.0}, 0.3};
  cfg.eps = 0.025;
  GreenTable gt(cfg.domain);
  Grid gy = make_expanded_grid(cfg);
  DirichletSystem ysys(expand_domain(cfg.domain, cfg.eps), gy);
  AnsatzBundle b = build_bundle(cfg, ysys, gt);
  CHECK(mass_expanded(b) == doctest::Approx(2.0 * kPi).epsilon(0.05));
}

TEST_CASE("deformation kernel pins") {
  CHECK(pohozaev_kernel(1.0, 2.0) == 0.0);                      // same sign
  CHECK(pohozaev_kernel(1.0, -1.0) == doctest::Approx(0.0));    // 1 - 2*1/2 = 0
  CHECK(pohozaev_kernel(1.0, -2.0) == doctest::Approx(1.0 / (54.0 * kPi)).epsilon(1e-13));
  CHECK_THROWS_AS(pohozaev_kernel(0.5, 0.5), std::invalid_argument);
  // exhaustive sign grid: vanishing on same-sign quadrants
  for (double x = 0.25; x < 4.0; x += 0.25)
    for (double y = 0.25; y < 4.0; y += 0.25) {
      if (x != y) CHECK(pohozaev_kernel(x, y) == 0.0);
      CHECK(pohozaev_kernel(-x, -y + (x == y ? 0.1 : 0.0)) == 0.0);
    }
}

TEST_CASE("pohozaev report on the zero function") {
  IntervalUnion J({{-11.0, -10.0}, {0.0, 1.0}});
  Grid g = Grid::cover(J, 2e-3, 3.0);
  PohozaevReport rep = pohozaev_check(GridFunction::zeros(g), 1.0, J);
  CHECK(rep.boundary_flux == 0.0);
  CHECK(rep.volume_term == 0.0);
  CHECK(rep.deformation_energy == 0.0);
  CHECK(rep.residual == 0.0);
}

TEST_CASE("pohozaev machine on a synthetic sqrt profile") {
  const double b = 5.0;
  IntervalUnion J({{-2.0 * b - 1.0, -2.0 * b}, {0.0, 1.0}});
  Grid g = Grid::cover(J, 1e-3, 3.0);
  auto prof = [&](double x) {
    if (x > 0.0 && x < 1.0) return std::sqrt(x * (1.0 - x));
    if (x > -2.0 * b - 1.0 && x < -2.0 * b) {
      const double t = x + 2.0 * b + 1.0;
      return 0.5 * std::sqrt(t * (1.0 - t));
    }
    return 0.0;
  };
  GridFunction w = GridFunction::sample(g, prof);
  w.set_closure(ExteriorClosure::zero());
  PohozaevReport rep = pohozaev_check(w, 1.0, J);
  // w^2/(1-x) -> 1 at the right endpoint of (0,1); flux = pi/4
  CHECK(rep.boundary_flux == doctest::Approx(kPi / 4.0).epsilon(1e-3));
  CHECK(rep.impl_agreement < 1e-10);
  CHECK(!rep.flagged);
}

TEST_CASE("kernel-energy bounds on random admissible profiles") {
  const double b = 2.0;
  IntervalUnion J({{-2.0 * b - 1.0, -2.0 * b}, {0.0, 1.0}});
  Grid g = Grid::cover(J, 4e-3, 3.0);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> amp(0.2, 1.5);
  for (int trial = 0; trial < 3; ++trial) {
    const double a1 = amp(rng), a2 = amp(rng);
    auto prof = [&](double x) {
      if (x > 0.0 && x < 1.0) return a1 * std::sin(kPi * x);
      if (x > -2.0 * b - 1.0 && x < -2.0 * b) return a2 * std::sin(kPi * (x + 2.0 * b + 1.0));
      return 0.0;
    };
    GridFunction v = GridFunction::sample(g, prof);
    v.set_closure(ExteriorClosure::zero());
    PohozaevReport rep = pohozaev_check(v, 1.0, J);

    double l1p = 0.0, l1m = 0.0, semi = 0.0;
    const Eigen::VectorXd& vals = v.values();
    for (int i = 0; i < g.n(); ++i) {
      const double x = g.node(i);
      if (x > 0.0 && x < 1.0) l1p += std::abs(vals[i]) * g.h();
      if (x > -2.0 * b - 1.0 && x < -2.0 * b) l1m += std::abs(vals[i]) * g.h();
    }
    for (int i = 0; i < g.n(); ++i)
      for (int j = i + 1; j < g.n(); ++j) {
        const double d = vals[i] - vals[j];
        if (d != 0.0) semi += 2.0 * d * d / ((double)(j - i) * (j - i));
      }
    CHECK(rep.deformation_energy >= -l1p * l1m / (kPi * b * b) - 1e-6);
    CHECK(rep.deformation_energy <= semi / (2.0 * kPi) + 1e-6);
  }
}

TEST_CASE("hopf ratio: explicit disk profile and scaling invariance") {
  Grid g(-2.0, 3.0, 5001);
  auto prof = [](double x) {
    return (x > 0.0 && x < 1.0) ? std::sqrt(x * (1.0 - x)) : 0.0;
  };
  GridFunction u = GridFunction::sample(g, prof);
  u.set_closure(ExteriorClosure::zero());
  HopfReport rep = hopf_bound_check(u);
  CHECK(!rep.skipped);
  CHECK(rep.c0 > 0.0);
  CHECK(rep.min_halflap_sample > -1e-6);  // superharmonic: equals 1 in (0,1)

  GridFunction u3(g, 3.0 * u.values(), ExteriorClosure::zero());
  HopfReport rep3 = hopf_bound_check(u3);
  CHECK(rep3.c0 == doctest::Approx(rep.c0).epsilon(1e-12));

  HopfReport rep0 = hopf_bound_check(GridFunction::zeros(g));
  CHECK(rep0.skipped);
}

TEST_CASE("L1 lower bound ratio: positive, eps-stable, delta0-monotone") {
  const double b = 5.0;
  IntervalUnion J({{-2.0 * b - 1.0, -2.0 * b}, {0.0, 1.0}});
  GreenTable gt(J);
  auto ratio_at = [&](double eps, double delta0) {
    BlowupConfig cfg;
    cfg.domain = J;
    cfg.xi = ConfigPoint{{-2.0 * b - 0.5, 0.5}, 0.3};
    cfg.eps = eps;
    cfg.grid_hx = 4e-3;
    Grid gy = make_expanded_grid(cfg);
    DirichletSystem ysys(expand_domain(J, eps), gy);
    AnsatzBundle bundle = build_bundle(cfg, ysys, gt);
    return l1_lower_bound_check(bundle, delta0);
  };
  const auto r1 = ratio_at(0.05, 0.1);
  const auto r2 = ratio_at(0.025, 0.1);
  CHECK(r1.positive);
  CHECK(r2.positive);
  CHECK(r2.ratio == doctest::Approx(r1.ratio).epsilon(0.15));
  // a larger delta0 raises the right-hand side; the ratio stays bounded below
  const auto r3 = ratio_at(0.05, 0.05);
  CHECK(r3.ratio > r1.ratio);
  CHECK(r1.ratio > 1.0);

  // m = 1 degenerate call still yields a positive report
  BlowupConfig cfg1;
  cfg1.domain = IntervalUnion({{-1.0, 1.0}});
  cfg1.xi = ConfigPoint{{0.0}, 0.3};
  cfg1.eps = 0.05;
  GreenTable gt1(cfg1.domain);
  Grid gy1 = make_expanded_grid(cfg1);
  DirichletSystem ysys1(expand_domain(cfg1.domain, cfg1.eps), gy1);
  AnsatzBundle b1 = build_bundle(cfg1, ysys1, gt1);
  CHECK(l1_lower_bound_check(b1, 0.1).positive);
}

TEST_CASE("nondegeneracy: multipliers, lifts, energy identity, rescaling") {
  NondegeneracyReport rep = nondegeneracy_check(2.0, 64);
  CHECK(rep.kernel_dim == 2);  // modes n = +-1 only
  CHECK(rep.lift_error < 1e-12);
  CHECK(rep.energy_rel_err0 < 1e-3);
  CHECK(rep.energy_rel_err1 < 1e-3);
  for (double r : rep.rescaling_residuals) CHECK(r < 1e-3);
  CHECK(rep.pass);

  CircleSpectrum spec(64);
  CHECK(spec.multiplier(0) - 1.0 == doctest::Approx(-1.0));  // no kernel at n = 0
  CHECK(spec.multiplier(1) - 1.0 == 0.0);
  CHECK(spec.multiplier(-1) - 1.0 == 0.0);

  // lift identity at theta = pi/6: both sides 1/2
  const double th = kPi / 6.0;
  const double x = std::cos(th) / (1.0 - std::sin(th));
  CHECK((x * x - 1.0) / (x * x + 1.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("barrier check at sigma = 0.5") {
  BarrierReport rep = barrier_check(0.5, {2, 3, 5, 8, 12, 20, 35, 50});
  CHECK(rep.pass);
  CHECK(rep.values.back() < 0.0);  // sigma=0.5, y=50 negative
  CHECK(std::abs(rep.envelope_exponent + 1.5) < 0.1);
  CHECK(rep.gamma_closed_form == doctest::Approx(-0.5));
  CHECK(rep.gamma_kernel_over_pi == doctest::Approx(-0.5).epsilon(1e-4));
  // w_sigma peaks at the origin with value 1
  CHECK(std::pow(1.0 + 0.0, -0.25) == 1.0);
}

TEST_CASE("nonexistence audit: slack at m = 1, finite crossover, feasibility") {
  AuditReport rep = nonexistence_audit(1, 0.1, 0.1, 5.0, {0.05});
  REQUIRE(rep.rows.size() == 1);
  CHECK(!rep.rows[0].contradiction);  // inequality slack at m = 1
  CHECK(rep.lambda_in_band);
  CHECK(rep.m_star_estimate > 0.0);
  CHECK(std::isfinite(rep.m_star_estimate));

  CHECK_THROWS_WITH_AS(nonexistence_audit(100, 0.1, 0.1, 5.0, {0.05}),
                       "ansatz infeasible: max feasible m = 18", std::invalid_argument);
}
