#include "liou/verify.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "liou/fracops.hpp"

namespace liou {

namespace {
constexpr double kPi = std::numbers::pi;

// midpoint-with-end-correction integral of fn over one component using a grid fn
double integrate_component(const GridFunction& u, double a, double b,
                           const std::function<double(double, double)>& fn) {
  const Grid& g = u.grid();
  const double h = g.h();
  double acc = 0.0;
  int first = -1, last = -1;
  for (int i = 0; i < g.n(); ++i) {
    const double x = g.node(i);
    if (x > a && x < b) {
      acc += fn(x, u.value(i)) * h;
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) return 0.0;
  // partial end cells
  const double la = (g.node(first) - 0.5 * h) - a;
  if (la > 0) {
    const double x = a + 0.5 * la;
    acc += fn(x, u(x)) * la;
  } else {
    acc += la * fn(a - 0.5 * la, u(a - 0.5 * la));  // overhang removed (la < 0)
  }
  const double lb = b - (g.node(last) + 0.5 * h);
  if (lb > 0) {
    const double x = b - 0.5 * lb;
    acc += fn(x, u(x)) * lb;
  } else {
    acc += lb * fn(b - 0.5 * lb, u(b - 0.5 * lb));
  }
  return acc;
}

double integrate_domain(const GridFunction& u, const IntervalUnion& I,
                        const std::function<double(double, double)>& fn) {
  double acc = 0.0;
  for (int k = 0; k < I.components(); ++k)
    acc += integrate_component(u, I.component(k).first, I.component(k).second, fn);
  return acc;
}
}  // namespace

double mass(const GridFunction& u, double eps, const KappaField& kappa,
            const IntervalUnion& domain) {
  return eps * integrate_domain(u, domain,
                                [&](double x, double v) { return kappa(x) * std::exp(v); });
}

double mass_expanded(const AnsatzBundle& bundle, const GridFunction* phi) {
  const Grid& gy = bundle.grid_y;
  const double h = gy.h();
  double acc = 0.0;
  for (int i = 0; i < gy.n(); ++i) {
    if (!bundle.domain_eps.contains(gy.node(i))) continue;
    const double p = phi ? phi->value(i) : 0.0;
    acc += bundle.W.value(i) * std::exp(p) * h;
  }
  return acc;
}

double pohozaev_kernel(double x, double y) {
  if (x == y) throw std::invalid_argument("pohozaev_kernel: singular input x = y");
  if (x * y >= 0.0) return 0.0;
  const double d = x - y;
  return (1.0 - 2.0 * std::max(x, y) / std::abs(d)) / (2.0 * kPi * d * d);
}

PohozaevReport pohozaev_check(const GridFunction& w, double lambda, const IntervalUnion& domain) {
  if (domain.components() != 2 || domain.component(1).first != 0.0 ||
      domain.component(1).second != 1.0)
    throw std::invalid_argument("pohozaev_check: domain must be the normalized (-2b-1,-2b) u (0,1)");
  const double bneg_lo = domain.component(0).first;   // -2b-1
  const double bneg_hi = domain.component(0).second;  // -2b
  const Grid& g = w.grid();
  const double h = g.h();

  PohozaevReport rep;

  // boundary flux: linear extrapolation of w^2/(1-x) in (1-x), assuming the
  // sqrt boundary profile
  {
    const double d1 = 5.0 * h, d2 = 10.0 * h;
    const double w1 = w(1.0 - d1), w2 = w(1.0 - d2);
    const double q1 = w1 * w1 / d1, q2 = w2 * w2 / d2;
    const double qstar = (q1 * d2 - q2 * d1) / (d2 - d1);
    rep.boundary_flux = kPi / 4.0 * qstar;
    if (!(qstar >= 0.0) || (q1 > 0 && std::abs(qstar - q1) > 0.75 * std::abs(qstar) + 1e-14)) {
      rep.flagged = true;
      rep.note = "boundary limit extrapolation unreliable";
    }
  }

  // volume term 2/lambda int_0^1 (e^{lambda w} - 1) / int_J e^{lambda w}
  if (lambda != 0.0) {
    const double denom =
        integrate_domain(w, domain, [&](double, double v) { return std::exp(lambda * v); });
    const double numer = integrate_component(
        w, 0.0, 1.0, [&](double, double v) { return std::exp(lambda * v) - 1.0; });
    rep.volume_term = 2.0 / lambda * numer / denom;
  }

  // deformation energy, kernel form and direct reduced form
  {
    std::vector<int> pos, neg;
    for (int i = 0; i < g.n(); ++i) {
      const double x = g.node(i);
      if (x > 0.0 && x < 1.0) pos.push_back(i);
      if (x > bneg_lo && x < bneg_hi) neg.push_back(i);
    }
    double ek = 0.0, ed = 0.0;
    for (int i : pos) {
      const double x = g.node(i), wx = w.value(i);
      for (int j : neg) {
        const double y = g.node(j), wy = w.value(j);
        const double dsq = (wx - wy) * (wx - wy);
        ek += 2.0 * dsq * pohozaev_kernel(x, y) * h * h;
        const double s = -y;
        ed += -(1.0 / kPi) * dsq * (x - s) / std::pow(x + s, 3) * h * h;
      }
    }
    // w(x)^2 against the kernel mass of the zero regions. For x > 0 > y,
    // int 2K dy has antiderivative (1/pi)(-y/(x-y)^2), which vanishes at both
    // y = 0 and y = -inf, so only the J^- window is subtracted.
    auto yprim = [](double x, double y) { return -y / ((x - y) * (x - y)); };
    for (int i : pos) {
      const double x = g.node(i), wx = w.value(i);
      const double comp = (yprim(x, bneg_hi) - yprim(x, bneg_lo)) / kPi;
      ek -= wx * wx * comp * h;
      ed -= wx * wx * comp * h;
    }
    // w(y)^2 against x in (1, inf); antiderivative (1/pi)(x/(x-y)^2) -> 0 at inf
    auto xprim = [](double x, double y) { return x / ((x - y) * (x - y)); };
    for (int j : neg) {
      const double y = g.node(j), wy = w.value(j);
      const double tail = -xprim(1.0, y) / kPi;
      ed += wy * wy * tail * h;
      ek += wy * wy * tail * h;
    }
    rep.deformation_energy = ek;
    rep.deformation_energy_direct = ed;
    rep.impl_agreement = std::abs(ek - ed);
  }

  rep.residual = rep.boundary_flux - rep.volume_term + rep.deformation_energy;
  return rep;
}

HopfReport hopf_bound_check(const GridFunction& u) {
  HopfReport rep;
  const Grid& g = u.grid();
  double l1 = 0.0, umax = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    const double x = g.node(i);
    if (x <= 0.0 || x >= 1.0) continue;
    if (u.value(i) < -1e-12) {
      rep.skipped = true;
      rep.note = "u takes negative values";
      return rep;
    }
    l1 += u.value(i) * g.h();
    umax = std::max(umax, u.value(i));
  }
  if (umax == 0.0) {
    rep.skipped = true;
    rep.note = "u vanishes on (0,1)";
    return rep;
  }
  // superharmonicity spot check away from under-resolved cores
  HalfLapEvaluator ev(u);
  rep.min_halflap_sample = std::numeric_limits<double>::infinity();
  for (double x : {0.11, 0.33, 0.52, 0.71, 0.93}) {
    const int i = g.nearest(x);
    if (i < 1 || i > g.n() - 2) continue;
    rep.min_halflap_sample = std::min(rep.min_halflap_sample, ev.at_node(i));
  }
  rep.c0 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.n(); ++i) {
    const double x = g.node(i);
    if (x <= 0.0 || x >= 1.0) continue;
    const double weight = l1 * std::sqrt(std::min(x, 1.0 - x));
    if (weight > 0.0) rep.c0 = std::min(rep.c0, u.value(i) / weight);
  }
  return rep;
}

L1LowerBoundReport l1_lower_bound_check(const AnsatzBundle& bundle, double delta0) {
  L1LowerBoundReport rep;
  const Grid gx = Grid::cover(bundle.cfg.domain, bundle.cfg.grid_hx, 3.0);
  GridFunction U = bundle.U_field(gx);
  rep.integral = integrate_domain(U, bundle.cfg.domain, [](double, double v) { return v; });
  rep.ratio = rep.integral / (bundle.cfg.m() * std::log1p(delta0));
  rep.positive = rep.ratio > 0.0;
  return rep;
}

NondegeneracyReport nondegeneracy_check(double mu, int modes) {
  if (modes < 8) throw std::invalid_argument("nondegeneracy_check: need at least 8 modes");
  NondegeneracyReport rep;

  CircleSpectrum spec(modes);
  for (int n = -modes; n <= modes; ++n)
    if (spec.multiplier(n) - 1.0 == 0.0) ++rep.kernel_dim;

  // stereographic pullback: phi0 -> sin(theta), phi1 -> cos(theta)
  auto phi0 = [](double x) { return (x * x - 1.0) / (x * x + 1.0); };
  auto phi1 = [](double x) { return 2.0 * x / (1.0 + x * x); };
  for (double th = -4.6; th < 1.5; th += 0.23) {
    if (std::abs(1.0 - std::sin(th)) < 1e-6) continue;
    const double x = std::cos(th) / (1.0 - std::sin(th));
    rep.lift_error = std::max(rep.lift_error, std::abs(phi0(x) - std::sin(th)));
    rep.lift_error = std::max(rep.lift_error, std::abs(phi1(x) - std::cos(th)));
  }

  // energy identity [phi]^2 = 2 pi int J phi^2, J = 2/(1+x^2); truncated double
  // sum on [-R,R] plus analytic-tail corrections through the exact formulas
  {
    const double R = 80.0, h = 0.02;
    const int n = 2 * static_cast<int>(R / h) + 1;
    auto energy = [&](const std::function<double(double)>& f) {
      double acc = 0.0;
      std::vector<double> fv(n);
      for (int i = 0; i < n; ++i) fv[i] = f(-R + i * h);
      for (int i = 0; i < n; ++i)
        for (int j = i + 2; j < n; ++j) {
          const double d = fv[i] - fv[j];
          acc += 2.0 * d * d / (static_cast<double>(j - i) * (j - i));
        }
      for (int i = 0; i + 1 < n; ++i) {
        const double d = fv[i] - fv[i + 1];
        acc += 2.0 * d * d;  // adjacent product-linear cells
      }
      for (int i = 1; i + 1 < n; ++i) {
        const double s = 0.5 * (fv[i + 1] - fv[i - 1]);
        acc += s * s;  // diagonal cells
      }
      // one side in [-R,R], the other beyond: reciprocal-variable quadrature
      const int P = 2000;
      for (int i = 0; i < n; ++i) {
        const double x = -R + i * h;
        double t1 = 0.0;
        for (int q = 0; q < P; ++q) {
          const double t = (q + 0.5) / P / R;  // y = 1/t in (R, inf)
          const double yr = 1.0 / t, yl = -1.0 / t;
          const double dr = f(x) - f(yr), dl = f(x) - f(yl);
          t1 += dr * dr / ((x - yr) * (x - yr)) / (t * t);
          t1 += dl * dl / ((x - yl) * (x - yl)) / (t * t);
        }
        acc += 2.0 * t1 * h / (P * R);
      }
      // both beyond R: bounded by (f tail variation)^2; integrate coarsely
      const int P2 = 400;
      double both = 0.0;
      for (int qa = 0; qa < P2; ++qa)
        for (int qb = 0; qb < P2; ++qb) {
          const double ta = (qa + 0.5) / P2 / R, tb = (qb + 0.5) / P2 / R;
          for (double sa : {-1.0, 1.0})
            for (double sb : {-1.0, 1.0}) {
              const double xa = sa / ta, xb = sb / tb;
              if (sa == sb && qa == qb) continue;
              const double d = f(xa) - f(xb);
              if (d == 0.0) continue;
              both += d * d / ((xa - xb) * (xa - xb)) / (ta * ta * tb * tb);
            }
        }
      acc += both / (P2 * R) / (P2 * R);
      return acc;
    };
    auto rhs = [&](const std::function<double(double)>& f) {
      // 2 pi int 2/(1+x^2) f^2, reciprocal variable beyond R
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        const double x = -R + i * h;
        acc += 2.0 / (1.0 + x * x) * f(x) * f(x) * h;
      }
      const int P = 4000;
      for (int q = 0; q < P; ++q) {
        const double t = (q + 0.5) / P / R;
        for (double s : {-1.0, 1.0}) {
          const double x = s / t;
          acc += 2.0 / (1.0 + x * x) * f(x) * f(x) / (t * t) / (P * R);
        }
      }
      return 2.0 * kPi * acc;
    };
    const double e0 = energy(phi0), r0 = rhs(phi0);
    const double e1 = energy(phi1), r1 = rhs(phi1);
    rep.energy_rel_err0 = std::abs(e0 - r0) / r0;
    rep.energy_rel_err1 = std::abs(e1 - r1) / r1;
  }

  // mu-rescaling reduction: Z_{i,mu,0} are discrete kernel elements of L_mu
  for (double m : {0.5, 1.0, mu}) {
    Grid g(-60.0 * m, 60.0 * m, 24001);
    TailModel t0{1.0 / m, 0.0, -2.0 * m, 2.0, 0.0};
    GridFunction Z0(g, Eigen::VectorXd(g.n()), ExteriorClosure::tails(t0, t0));
    TailModel tl{0.0, 0.0, -2.0, 1.0, 0.0}, tr{0.0, 0.0, 2.0, 1.0, 0.0};
    GridFunction Z1(g, Eigen::VectorXd(g.n()), ExteriorClosure::tails(tl, tr));
    for (int i = 0; i < g.n(); ++i) {
      const double y = g.node(i);
      Z0.values()[i] = 1.0 / m - 2.0 * m / (m * m + y * y);
      Z1.values()[i] = 2.0 * y / (m * m + y * y);
    }
    HalfLapEvaluator e0(Z0), e1(Z1);
    double worst = 0.0;
    for (double y = -8.0; y <= 8.0; y += 0.5) {
      const int i = g.nearest(y);
      const double Wm = 2.0 * m / (m * m + g.node(i) * g.node(i));
      worst = std::max(worst, std::abs(e0.at_node(i) - Wm * Z0.value(i)));
      worst = std::max(worst, std::abs(e1.at_node(i) - Wm * Z1.value(i)));
    }
    rep.rescaling_residuals.push_back(worst);
  }

  double worst_resc = 0.0;
  for (double r : rep.rescaling_residuals) worst_resc = std::max(worst_resc, r);
  rep.pass = rep.kernel_dim == 2 && rep.lift_error < 1e-12 && rep.energy_rel_err0 < 1e-3 &&
             rep.energy_rel_err1 < 1e-3 && worst_resc < 1e-3;
  return rep;
}

BarrierReport barrier_check(double sigma, const std::vector<double>& radii) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("barrier_check: sigma in (0,1)");
  BarrierReport rep;
  rep.radii = radii;

  auto w = [sigma](double y) { return std::pow(1.0 + y * y, -0.5 * sigma); };
  SmoothHalfLap op(w, ExteriorClosure::analytic(w), 0.0, 1.0, 2e-3);
  for (double r : radii) rep.values.push_back(op.at(r));

  // onset of negativity
  rep.r0 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    bool all_neg = true;
    for (std::size_t j = i; j < radii.size(); ++j) all_neg = all_neg && rep.values[j] < 0.0;
    if (all_neg) {
      rep.r0 = radii[i];
      break;
    }
  }
  // the prefactor approaches its limit at rate r^{-(1-sigma)}; fit the envelope
  // on far radii and extrapolate gamma with the known exponent
  {
    const double far[] = {250.0, 500.0, 1000.0, 2000.0};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (double r : far) {
      const double v = op.at(r);
      if (v >= 0.0) continue;
      const double lx = std::log(r), ly = std::log(-v);
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
      ++cnt;
    }
    rep.envelope_exponent = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0.0;

    const double y1 = 1000.0, y2 = 2000.0;
    const double g1 = std::pow(y1, 1.0 + sigma) * op.at(y1);
    const double g2 = std::pow(y2, 1.0 + sigma) * op.at(y2);
    const double q = std::pow(2.0, -(1.0 - sigma));
    rep.gamma_quadrature = (g2 - q * g1) / (1.0 - q);
  }
  {
    // -(1/pi) int_0^1 (t^{s/2} - t^{-s/2})^2 K(t) dt on panels graded to 0
    auto K = [](double t) { return 1.0 / ((t - 1) * (t - 1)) + 1.0 / ((t + 1) * (t + 1)); };
    double acc = 0.0;
    double hi = 1.0;
    for (int panel = 0; panel < 60; ++panel) {
      const double lo = hi * 0.5;
      const int Q = 64;
      for (int q = 0; q < Q; ++q) {
        const double t = lo + (hi - lo) * (q + 0.5) / Q;
        const double d = std::pow(t, 0.5 * sigma) - std::pow(t, -0.5 * sigma);
        acc += d * d * K(t) * (hi - lo) / Q;
      }
      hi = lo;
    }
    rep.gamma_kernel_over_pi = -acc / kPi;
  }
  rep.gamma_closed_form = -sigma * std::tan(0.5 * kPi * sigma);

  const double rel01 = std::abs(rep.gamma_quadrature - rep.gamma_kernel_over_pi) /
                       std::abs(rep.gamma_closed_form);
  rep.pass = std::isfinite(rep.r0) && std::abs(rep.envelope_exponent + 1.0 + sigma) < 0.1 &&
             rep.gamma_quadrature < 0.0 && rel01 < 1e-2;
  return rep;
}

namespace {

AuditRow audit_row(const IntervalUnion& J, const GreenTable& greens,
                   const std::vector<double>& xi, double b, double eps, double delta0,
                   double min_sep, double grid_hy, double grid_hx) {
  BlowupConfig cfg;
  cfg.domain = J;
  cfg.kappa = KappaField::constant(1.0);
  cfg.xi = ConfigPoint{xi, std::min(delta0, min_sep) * (1.0 - 1e-9)};
  cfg.eps = eps;
  cfg.grid_hy = grid_hy;
  cfg.grid_hx = grid_hx;
  cfg.audit_mode = true;
  Grid gy = make_expanded_grid(cfg);
  DirichletSystem ysys(expand_domain(J, eps), gy);
  AnsatzBundle bundle = build_bundle(cfg, ysys, greens);

  AuditRow row;
  row.eps = eps;
  row.lambda = mass_expanded(bundle);
  const Grid gx = Grid::cover(J, grid_hx, 3.0);
  GridFunction U = bundle.U_field(gx);
  row.l1_plus = integrate_component(U, 0.0, 1.0,
                                    [](double, double v) { return std::abs(v); }) /
                row.lambda;
  row.l1_minus = integrate_component(U, -2.0 * b - 1.0, -2.0 * b,
                                     [](double, double v) { return std::abs(v); }) /
                 row.lambda;

  // Hopf constant measured on w = U/lambda restricted to (0,1)
  Eigen::VectorXd wv = U.values() / row.lambda;
  for (int i = 0; i < gx.n(); ++i)
    if (!(gx.node(i) > 0.0 && gx.node(i) < 1.0)) wv[i] = 0.0;
  GridFunction wpos(gx, std::move(wv), ExteriorClosure::zero());
  row.c0 = hopf_bound_check(wpos).c0;

  row.lhs = row.c0 * row.c0 * kPi / 4.0 * row.l1_plus * row.l1_plus;
  row.rhs = 2.0 / row.lambda + row.l1_plus * row.l1_minus / (kPi * b * b);
  row.contradiction = row.lhs > row.rhs;
  return row;
}

}  // namespace

AuditReport nonexistence_audit(int m, double delta0, double delta, double b,
                               const std::vector<double>& eps_list, double grid_hy,
                               double grid_hx) {
  if (m < 1) throw std::invalid_argument("nonexistence_audit: m >= 1");
  AuditReport rep;
  rep.m = m;
  rep.delta0 = delta0;
  rep.delta = delta;
  rep.b = b;

  IntervalUnion J({{-2.0 * b - 1.0, -2.0 * b}, {0.0, 1.0}});
  const int cap_per_comp = static_cast<int>(std::floor((1.0 - 2.0 * delta0) / delta)) + 1;
  if (m > 2 * cap_per_comp) {
    std::ostringstream os;
    os << "ansatz infeasible: max feasible m = " << 2 * cap_per_comp;
    throw std::invalid_argument(os.str());
  }
  // requested configuration: points packed at separation delta, the (0,1)
  // side filled first so |w|_{L1(0,1)} dominates
  std::vector<double> xi;
  const int n_pos = std::min(cap_per_comp, (m + 1) / 2);
  for (int k = 0; k < n_pos; ++k) xi.push_back(delta0 + k * delta);
  for (int k = 0; k < m - n_pos; ++k) xi.push_back(-2.0 * b - 1.0 + delta0 + k * delta);

  GreenTable greens(J);
  for (double eps : eps_list)
    rep.rows.push_back(audit_row(J, greens, xi, b, eps, delta0, delta, grid_hy, grid_hx));

  // The crossover constants c_0, c_1 do not depend on the packing separation;
  // they are measured on the clean one-point-per-component baseline, where the
  // per-bubble mass sits in its band at desk-scale eps.
  const std::vector<double> xi_base = {-2.0 * b - 0.5, 0.5};
  const double eps_fine = eps_list.back();
  AuditRow base =
      audit_row(J, greens, xi_base, b, eps_fine, delta0, 1.0, grid_hy, grid_hx);
  rep.lambda_per_bubble = base.lambda / 2.0;
  rep.lambda_in_band =
      base.lambda >= 2.0 * kPi && base.lambda <= 6.0 * kPi;  // m pi <= lambda <= 3 m pi, m = 2

  // chain with measured constants: lhs is m-independent, rhs = 2/(lambda_1 m)
  const double c1 = (base.l1_plus + base.l1_minus) * base.lambda / 2.0 / std::log1p(delta0);
  const double w_l1_per = c1 * std::log1p(delta0) / rep.lambda_per_bubble;  // |w|_L1 / m * m
  const double lhs_bar = base.c0 * base.c0 * kPi / 32.0 * w_l1_per * w_l1_per;
  if (lhs_bar > 0.0) {
    rep.m_star_estimate = std::ceil(2.0 / (rep.lambda_per_bubble * lhs_bar));
    std::ostringstream os;
    os.precision(6);
    os << "constants from the separated baseline: c0=" << base.c0 << ", c1=" << c1
       << ", lambda/m=" << rep.lambda_per_bubble;
    rep.note = os.str();
  } else {
    rep.note = "no crossover at measured constants";
  }
  return rep;
}

}  // namespace liou
