#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "liou/fracops.hpp"
#include "liou/greens.hpp"

using namespace liou;

TEST_CASE("fundamental solution") {
  CHECK(gamma_fs(1.0) == 0.0);
  CHECK(gamma_fs(-1.0) == 0.0);  // even
  CHECK(gamma_fs(std::exp(-1.0)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(gamma_fs(0.0), std::invalid_argument);
}

TEST_CASE("single-interval Green closed form") {
  // G1(0, 0.5) = 2 log((1 + sqrt(0.75)) / 0.5)
  CHECK(green_single(0.0, 0.5, -1.0, 1.0) ==
        doctest::Approx(2.0 * std::log((1.0 + std::sqrt(0.75)) / 0.5)).epsilon(1e-12));
  CHECK(green_single(0.0, 0.5, -1.0, 1.0) == doctest::Approx(2.63392).epsilon(1e-5));
  CHECK(green_single(1.5, 0.5, -1.0, 1.0) == 0.0);   // zero outside
  CHECK(green_single(-3.0, 0.5, -1.0, 1.0) == 0.0);
  CHECK_THROWS_AS(green_single(0.5, 0.5, -1.0, 1.0), std::invalid_argument);

  // symmetry on random pairs
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  for (int t = 0; t < 50; ++t) {
    const double x = u(rng), z = u(rng);
    if (std::abs(x - z) < 1e-6) continue;
    CHECK(green_single(x, z, -1.0, 1.0) ==
          doctest::Approx(green_single(z, x, -1.0, 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("regular part closed form and Robin diagonal") {
  CHECK(regular_part_single(0.0, 0.0, -1.0, 1.0) == doctest::Approx(2.0 * std::log(2.0)));
  CHECK(regular_part_single(0.0, 0.0, -1.0, 1.0) == doctest::Approx(1.386294).epsilon(1e-6));
  // H(x,x) = 2 log(2(1-x^2)) on (-1,1)
  for (double x : {0.3, -0.62, 0.9}) {
    CHECK(regular_part_single(x, x, -1.0, 1.0) ==
          doctest::Approx(2.0 * std::log(2.0 * (1.0 - x * x))).epsilon(1e-12));
  }
  // continuous extension to the diagonal along a sequence
  const double z = 0.41;
  for (double d : {1e-3, 1e-5}) {
    CHECK(regular_part_single(z + d, z, -1.0, 1.0) ==
          doctest::Approx(regular_part_single(z, z, -1.0, 1.0)).epsilon(2e-2 * d / 1e-5));
  }
  // H(0, 0.5) = G1(0,0.5) - Gamma(-0.5)
  CHECK(regular_part_single(0.0, 0.5, -1.0, 1.0) == doctest::Approx(1.24763).epsilon(1e-5));
  // blow up towards the endpoints
  CHECK(regular_part_single(0.999, 0.999, -1.0, 1.0) < -10.0);
  // Robin function is even and decreasing in |x|
  double prev = regular_part_single(0.0, 0.0, -1.0, 1.0);
  for (double x = 0.1; x < 1.0; x += 0.1) {
    const double cur = regular_part_single(x, x, -1.0, 1.0);
    CHECK(cur < prev);
    CHECK(cur == doctest::Approx(regular_part_single(-x, -x, -1.0, 1.0)).epsilon(1e-13));
    prev = cur;
  }
  // affine transplant: midpoint value on (a,b) is 2 log(b-a)
  CHECK(regular_part_single(1.09, 1.09, 0.37, 1.81) ==
        doctest::Approx(2.0 * std::log(1.81 - 0.37)).epsilon(1e-12));
}

TEST_CASE("spectral solver reproduces the unit-rhs profile exactly") {
  SpectralDirichlet sp(IntervalUnion({{-1.0, 1.0}}), 32);
  auto u = sp.solve([](double) { return 1.0; });
  for (double x : {-0.95, -0.2, 0.0, 0.77})
    CHECK(u(x) == doctest::Approx(std::sqrt(1.0 - x * x)).epsilon(1e-13));
  CHECK(u(2.0) == 0.0);
  CHECK(u.tail_indicator() < 1e-12);
}

TEST_CASE("numeric Green on (-1,1) matches the closed form") {
  auto sp = std::make_shared<SpectralDirichlet>(IntervalUnion({{-1.0, 1.0}}), 256);
  for (double z : {0.0, 0.3, -0.45}) {
    NumericGreen ng(sp, z);
    double errH = 0.0, errG = 0.0;
    for (double x = -0.999; x < 1.0; x += 0.00997) {
      errH = std::max(errH, std::abs(ng.H(x) - regular_part_single(x, z, -1.0, 1.0)));
      if (std::abs(x - z) > 1e-2)
        errG = std::max(errG, std::abs(ng.G(x) - green_single(x, z, -1.0, 1.0)));
    }
    CHECK(errH < 1e-4);
    CHECK(errG < 1e-4);
    CHECK(ng.H(z) == doctest::Approx(regular_part_single(z, z, -1, 1)).epsilon(2e-5));
  }
  CHECK_THROWS_AS(NumericGreen(sp, 1.5), std::invalid_argument);
}

TEST_CASE("half-Laplacian of the numeric G vanishes away from the source") {
  // the log singularity at the source dominates the grid truncation, so the
  // residual away from it must be grid-level and shrink under refinement
  IntervalUnion I({{-1.0, 1.0}});
  auto sp = std::make_shared<SpectralDirichlet>(I, 192);
  const double z = 0.2;
  NumericGreen ng(sp, z);
  auto residual = [&](double h) {
    Grid g = Grid::cover(I, h, 3.0);
    Eigen::VectorXd v(g.n());
    for (int i = 0; i < g.n(); ++i) {
      const double x = g.node(i);
      v[i] = (I.contains(x) && std::abs(x - z) > 1e-9) ? ng.G(x) : 0.0;
    }
    GridFunction Gf(g, std::move(v), ExteriorClosure::zero());
    HalfLapEvaluator ev(Gf);
    double worst = 0.0;
    for (double x : {-0.6, -0.3, 0.55, 0.8})
      worst = std::max(worst, std::abs(ev.at_node(g.nearest(x))));
    return worst;
  };
  const double r1 = residual(2e-3), r2 = residual(1e-3);
  CHECK(r1 < 0.15);
  CHECK(r2 < 0.6 * r1);
}

TEST_CASE("two-interval table: symmetry, positivity, Kelvin bound") {
  IntervalUnion I({{-2.0, -1.0}, {1.0, 2.0}});
  GreenTable gt(I, 96);
  CHECK(!gt.closed_form());

  std::vector<std::pair<double, double>> pairs = {
      {-1.5, 1.5}, {-1.8, 1.2}, {-1.2, 1.7}, {1.3, 1.8}, {-1.9, -1.1}, {1.05, 1.95}};
  CHECK(gt.symmetry_error(pairs) < 1e-6);

  double minG = 1e300;
  for (double x = 1.02; x < 2.0; x += 0.037)
    for (double z = -1.98; z < -1.0; z += 0.041) minG = std::min(minG, gt.G(x, z));
  CHECK(minG > -1e-9);

  // the gap (-1,1) sits in the complement, so the Kelvin comparison applies
  for (double z = 1.05; z < 2.0; z += 0.05)
    CHECK(gt.robin(z) <= 2.0 * std::log(2.0 * (z * z - 1.0)) + 1e-6);
}

TEST_CASE("symmetry error shrinks when the cross-kernel quadrature refines") {
  IntervalUnion I({{-2.0, -1.0}, {0.5, 2.5}});
  auto sp = std::make_shared<SpectralDirichlet>(I, 64);
  std::vector<std::pair<double, double>> pairs = {{-1.7, 1.1}, {-1.2, 2.1}};
  auto sym_err = [&](int q0) {
    double worst = 0.0;
    for (auto [x, z] : pairs) {
      NumericGreen a(sp, z, 3e-3, q0), b(sp, x, 3e-3, q0);
      worst = std::max(worst, std::abs(a.G(x) - b.G(z)));
    }
    return worst;
  };
  const double coarse = sym_err(48), fine = sym_err(768);
  CHECK(fine < coarse);
  CHECK(fine < 1e-6);
}

TEST_CASE("green table closed form on one interval") {
  GreenTable gt(IntervalUnion({{-1.0, 1.0}}), 48);
  CHECK(gt.closed_form());
  CHECK(gt.robin(0.0) == doctest::Approx(2.0 * std::log(2.0)));
  CHECK(gt.G(0.0, 0.5) == doctest::Approx(2.63392).epsilon(1e-5));
  const std::string csv = gt.to_csv(5);
  CHECK(csv.rfind("x,z,G,H", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') > 3);
}

TEST_CASE("green lower bound ratio is positive, also across components") {
  {
    GreenTable gt(IntervalUnion({{-1.0, 1.0}}), 48);
    std::vector<std::pair<double, double>> pairs;
    for (double x = -0.8; x < 0.9; x += 0.23)
      for (double y = -0.7; y < 0.9; y += 0.31)
        if (std::abs(x - y) > 1e-3) pairs.emplace_back(x, y);
    auto rep = green_lower_bound_check(gt, pairs);
    CHECK(rep.positive);
    CHECK(rep.min_ratio > 0.0);
  }
  {
    // pairs straddling two far components: ratio small but positive
    IntervalUnion I({{-7.0, -6.0}, {6.0, 7.0}});
    GreenTable gt(I, 64);
    std::vector<std::pair<double, double>> pairs = {{-6.5, 6.5}, {-6.2, 6.8}};
    auto rep = green_lower_bound_check(gt, pairs);
    CHECK(rep.positive);
    CHECK(rep.min_ratio > 0.0);
    CHECK(rep.min_ratio < 1.0);
  }
}

TEST_CASE("numeric green refuses sources too close to the boundary") {
  IntervalUnion I({{-2.0, -1.0}, {1.0, 2.0}});
  auto sp = std::make_shared<SpectralDirichlet>(I, 32);
  CHECK_THROWS_WITH_AS(NumericGreen(sp, 1.0 + 1e-9), "source unresolved", std::runtime_error);
}
