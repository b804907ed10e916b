#include "liou/reduced.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace liou {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double golden_polish(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - gr * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + gr * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}
}  // namespace

double xi_energy(const std::vector<double>& xi, const KappaField& kappa,
                 const GreenTable& greens) {
  const int m = static_cast<int>(xi.size());
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < j; ++i)
      if (xi[i] == xi[j]) return -kInf;
  double total = 0.0;
  for (int j = 0; j < m; ++j) {
    double term = 2.0 * std::log(kappa(xi[j])) + greens.robin(xi[j]);
    for (int i = 0; i < m; ++i)
      if (i != j) term += greens.G(xi[j], xi[i]);
    total -= term;
  }
  return total;
}

XiLandscape::XiLandscape(const IntervalUnion& domain, const KappaField& kappa,
                         std::shared_ptr<const GreenTable> greens, std::vector<int> beta,
                         double delta)
    : domain_(domain), kappa_(kappa), greens_(std::move(greens)), beta_(std::move(beta)),
      delta_(delta) {
  if (beta_.empty()) throw std::invalid_argument("XiLandscape: empty assignment");
  for (int b : beta_)
    if (b < 0 || b >= domain_.components())
      throw std::invalid_argument("XiLandscape: assignment out of range");
  if (!(delta_ > 0.0)) throw std::invalid_argument("XiLandscape: delta must be positive");
  for (int j = 0; j < m(); ++j) {
    auto [lo, hi] = box(j);
    if (!(lo < hi)) throw std::invalid_argument("XiLandscape: component thinner than 2 delta");
  }
}

std::pair<double, double> XiLandscape::box(int j) const {
  const auto& [a, b] = domain_.component(beta_[j]);
  return {a + delta_, b - delta_};
}

double XiLandscape::operator()(const std::vector<double>& xi) const {
  if (static_cast<int>(xi.size()) != m()) throw std::invalid_argument("XiLandscape: arity");
  for (int j = 0; j < m(); ++j) {
    auto [lo, hi] = box(j);
    if (xi[j] < lo || xi[j] > hi) return kInf;
  }
  const double v = xi_energy(xi, kappa_, *greens_);
  return std::isfinite(v) ? v : kInf;  // diagonal excluded from the search region
}

void XiLandscape::tabulate(int points_per_dim) {
  cache_.clear();
  const int P = points_per_dim;
  std::vector<int> idx(m(), 0);
  while (true) {
    std::vector<double> xi(m());
    for (int j = 0; j < m(); ++j) {
      auto [lo, hi] = box(j);
      xi[j] = lo + (hi - lo) * idx[j] / (P - 1);
    }
    std::vector<double> row = xi;
    row.push_back(xi_energy(xi, kappa_, *greens_));
    cache_.push_back(std::move(row));
    int j = 0;
    while (j < m() && ++idx[j] == P) idx[j++] = 0;
    if (j == m()) break;
  }
}

void XiLandscape::set_minimizer(std::vector<double> xi, double val) {
  min_xi_ = std::move(xi);
  min_val_ = val;
}

std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> start,
                                const std::vector<std::pair<double, double>>& box, double tol,
                                int max_iter, unsigned int seed) {
  const int n = static_cast<int>(start.size());
  std::mt19937_64 rng(seed);
  auto clampv = [&](std::vector<double> x) {
    for (int j = 0; j < n; ++j) x[j] = std::clamp(x[j], box[j].first, box[j].second);
    return x;
  };
  std::vector<std::vector<double>> simplex(n + 1, start);
  for (int j = 0; j < n; ++j) {
    const double span = box[j].second - box[j].first;
    simplex[j + 1][j] += 0.05 * span;
    simplex[j + 1] = clampv(simplex[j + 1]);
    if (simplex[j + 1][j] == simplex[0][j]) simplex[j + 1][j] -= 0.05 * span;
  }
  std::vector<double> fv(n + 1);
  for (int i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

  for (int it = 0; it < max_iter; ++it) {
    std::vector<int> order(n + 1);
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];

    double spread = 0.0;
    for (int j = 0; j < n; ++j)
      spread = std::max(spread, std::abs(simplex[worst][j] - simplex[best][j]));
    if (spread < tol && std::isfinite(fv[best])) break;

    std::vector<double> centroid(n, 0.0);
    for (int i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (int j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;
    }
    auto blend = [&](double t) {
      std::vector<double> x(n);
      for (int j = 0; j < n; ++j) x[j] = centroid[j] + t * (centroid[j] - simplex[worst][j]);
      return clampv(x);
    };
    std::vector<double> xr = blend(1.0);
    const double fr = f(xr);
    if (fr < fv[best]) {
      std::vector<double> xe = blend(2.0);
      const double fe = f(xe);
      if (fe < fr) { simplex[worst] = xe; fv[worst] = fe; }
      else { simplex[worst] = xr; fv[worst] = fr; }
    } else if (fr < fv[second]) {
      simplex[worst] = xr; fv[worst] = fr;
    } else {
      std::vector<double> xc = blend(-0.5);
      const double fc = f(xc);
      if (fc < fv[worst]) { simplex[worst] = xc; fv[worst] = fc; }
      else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (int j = 0; j < n; ++j)
            simplex[i][j] = 0.5 * (simplex[i][j] + simplex[best][j]);
          fv[i] = f(simplex[i]);
        }
      }
    }
    // rare restart kick if the simplex degenerated onto the box edge
    if (it > 0 && it % 197 == 0) {
      std::uniform_real_distribution<double> u(-1e-3, 1e-3);
      for (int j = 0; j < n; ++j) simplex[worst][j] += u(rng) * (box[j].second - box[j].first);
      simplex[worst] = clampv(simplex[worst]);
      fv[worst] = f(simplex[worst]);
    }
  }
  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (fv[i] < fv[best]) best = i;
  return simplex[best];
}

ConfigPoint minimize_xi(XiLandscape& landscape, double tol, double delta0_out,
                        unsigned int seed) {
  const int m = landscape.m();
  std::vector<std::pair<double, double>> box(m);
  std::vector<double> start(m);
  for (int j = 0; j < m; ++j) {
    box[j] = landscape.box(j);
    start[j] = 0.5 * (box[j].first + box[j].second);
  }
  auto f = [&](const std::vector<double>& xi) { return landscape(xi); };

  std::vector<double> xi = nelder_mead(f, start, box, std::max(tol * 0.1, 1e-12), 400, seed);
  // coordinate-wise golden-section polish
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (int j = 0; j < m; ++j) {
      auto [lo, hi] = box[j];
      const double span = hi - lo;
      const double wlo = std::max(lo, xi[j] - 0.05 * span);
      const double whi = std::min(hi, xi[j] + 0.05 * span);
      xi[j] = golden_polish(
          [&](double t) {
            std::vector<double> p = xi;
            p[j] = t;
            return f(p);
          },
          wlo, whi, std::max(tol * 1e-3, 1e-13));
    }
  }
  const double val = f(xi);
  if (!std::isfinite(val)) throw std::runtime_error("no interior minimum at this resolution");

  // finite-difference gradient must be small and the point interior
  for (int j = 0; j < m; ++j) {
    auto [lo, hi] = box[j];
    const double margin = 1e-6 * (hi - lo);
    if (xi[j] - lo < margin || hi - xi[j] < margin)
      throw std::runtime_error("no interior minimum at this resolution");
    const double step = 1e-5 * (hi - lo);
    std::vector<double> pp = xi, pm = xi;
    pp[j] += step;
    pm[j] -= step;
    const double grad = (f(pp) - f(pm)) / (2.0 * step);
    if (std::abs(grad) * step > 100.0 * std::max(tol, 1e-12))
      throw std::runtime_error("no interior minimum at this resolution");
  }
  landscape.set_minimizer(xi, val);
  return ConfigPoint{xi, delta0_out};
}

double full_energy(const GridFunction& u, double eps, const KappaField& kappa,
                   const IntervalUnion& domain) {
  const Grid& g = u.grid();
  const int n = g.n();
  const double h = g.h();
  const Eigen::VectorXd& v = u.values();

  // seminorm: product-linear diagonal and adjacent cells, exact cell-pair
  // kernels beyond
  double semi = 0.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double s = 0.5 * (v[i + 1] - v[i - 1]);
    semi += s * s;
  }
  for (int i = 0; i + 1 < n; ++i) {
    const double d = v[i + 1] - v[i];
    semi += 2.0 * d * d;
  }
  std::vector<double> w(n, 0.0);
  for (int k = 2; k < n; ++k) w[k] = -std::log1p(-1.0 / (static_cast<double>(k) * k));
  for (int i = 0; i < n; ++i) {
    for (int k = 2; k < n - i; ++k) {
      const double d = v[i] - v[i + k];
      if (d != 0.0) semi += 2.0 * d * d * w[k];
    }
  }
  // window-exterior strip: u = 0 beyond, both orders of the pair
  for (int i = 0; i < n; ++i) {
    if (v[i] == 0.0) continue;
    const double xr = g.b() + 0.5 * h - g.node(i);
    const double xl = g.node(i) - (g.a() - 0.5 * h);
    semi += 2.0 * v[i] * v[i] * h * (1.0 / xr + 1.0 / xl);
  }
  semi /= 4.0 * std::numbers::pi;

  double pot = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = g.node(i);
    if (domain.contains(x)) pot += kappa(x) * std::exp(v[i]);
  }
  pot *= eps * h;
  return semi - pot;
}

}  // namespace liou
