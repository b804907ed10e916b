#include "liou/greens.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace liou {

namespace {
constexpr double kPi = std::numbers::pi;

// affine map of (a,b) onto (-1,1)
double to_unit(double x, double a, double b) { return (2.0 * x - (a + b)) / (b - a); }

double h1_unit(double t, double s) {
  return 2.0 * std::log(1.0 - t * s + std::sqrt((1.0 - t * t) * (1.0 - s * s)));
}
}  // namespace

double gamma_fs(double x) {
  if (x == 0.0) throw std::invalid_argument("gamma_fs: singular input x = 0");
  return -2.0 * std::log(std::abs(x));
}

double green_single(double x, double z, double a, double b) {
  const double s = to_unit(z, a, b);
  if (!(s > -1.0 && s < 1.0)) throw std::invalid_argument("green_single: z not inside (a,b)");
  if (x == z) throw std::invalid_argument("green_single: singular input x = z");
  const double t = to_unit(x, a, b);
  if (t <= -1.0 || t >= 1.0) return 0.0;
  return h1_unit(t, s) - 2.0 * std::log(std::abs(t - s));
}

double regular_part_single(double x, double z, double a, double b) {
  const double s = to_unit(z, a, b);
  if (!(s > -1.0 && s < 1.0))
    throw std::invalid_argument("regular_part_single: z not inside (a,b)");
  const double t = to_unit(x, a, b);
  const double shift = -2.0 * std::log(2.0 / (b - a));
  if (t <= -1.0 || t >= 1.0) {
    // G = 0 outside, so H = -Gamma(x-z)
    return 2.0 * std::log(std::abs(x - z));
  }
  return h1_unit(t, s) + shift;
}

SpectralDirichlet::SpectralDirichlet(IntervalUnion domain, int modes_per_component,
                                     int quad_per_component)
    : domain_(std::move(domain)), modes_(modes_per_component), quad_(quad_per_component) {
  if (modes_ < 8) throw std::invalid_argument("SpectralDirichlet: need at least 8 modes");
  if (quad_ <= 0) quad_ = 3 * modes_ + 1;
  const int d = domain_.components();
  const int Q = quad_;

  theta_.resize(Q);
  for (int q = 0; q < Q; ++q) theta_[q] = (q + 1) * kPi / (Q + 1);

  // test_[k](m,q) = (pi/(Q+1)) sin(theta_q) sin((m+1) theta_q); the Gauss-Chebyshev
  // weight sin^2 and the 1/sin of U_m fold together.
  test_.assign(d, Eigen::MatrixXd(modes_, Q));
  for (int k = 0; k < d; ++k)
    for (int m = 0; m < modes_; ++m)
      for (int q = 0; q < Q; ++q)
        test_[k](m, q) = (kPi / (Q + 1)) * std::sin(theta_[q]) * std::sin((m + 1) * theta_[q]);

  A_.setZero(d * modes_, d * modes_);
  for (int j = 0; j < d; ++j) {
    const auto [aj, bj] = domain_.component(j);
    const double Lj = bj - aj;
    for (int n = 0; n < modes_; ++n)
      A_(j * modes_ + n, j * modes_ + n) = (2.0 / Lj) * (n + 1) * (kPi / 2.0);
    for (int k = 0; k < d; ++k) {
      if (k == j) continue;
      const auto [ak, bk] = domain_.component(k);
      const double Lk = bk - ak;
      Eigen::MatrixXd K(Q, Q);
      for (int q = 0; q < Q; ++q) {
        const double x = 0.5 * (aj + bj) + 0.5 * Lj * std::cos(theta_[q]);
        for (int p = 0; p < Q; ++p) {
          const double y = 0.5 * (ak + bk) + 0.5 * Lk * std::cos(theta_[p]);
          K(q, p) = 1.0 / ((x - y) * (x - y));
        }
      }
      A_.block(j * modes_, k * modes_, modes_, modes_) =
          -(Lk / (2.0 * kPi)) * test_[j] * K * test_[k].transpose();
    }
  }
  lu_.compute(A_);
  if (lu_.rcond() < 1e-14) throw std::runtime_error("discretization failure");
}

SpectralDirichlet::Solution SpectralDirichlet::solve(
    const std::function<double(double)>& rhs) const {
  const int d = domain_.components();
  const int Q = quad_;
  Eigen::VectorXd b(d * modes_);
  for (int j = 0; j < d; ++j) {
    const auto [aj, bj] = domain_.component(j);
    Eigen::VectorXd f(Q);
    for (int q = 0; q < Q; ++q) f[q] = rhs(0.5 * (aj + bj) + 0.5 * (bj - aj) * std::cos(theta_[q]));
    b.segment(j * modes_, modes_) = test_[j] * f;
  }
  Solution sol;
  sol.owner_ = this;
  sol.coeffs_ = lu_.solve(b);
  return sol;
}

double SpectralDirichlet::Solution::operator()(double x) const {
  const auto& dom = owner_->domain_;
  const int k = dom.component_of(x);
  if (k < 0) return 0.0;
  const auto [a, b] = dom.component(k);
  const double t = std::clamp(to_unit(x, a, b), -1.0, 1.0);
  const double th = std::acos(t);
  const int N = owner_->modes_;
  double v = 0.0;
  for (int n = 0; n < N; ++n) v += coeffs_[k * N + n] * std::sin((n + 1) * th);
  return v;
}

double SpectralDirichlet::Solution::tail_indicator() const {
  const int N = owner_->modes_;
  const int d = owner_->domain_.components();
  double worst = 0.0;
  for (int k = 0; k < d; ++k) {
    const auto seg = coeffs_.segment(k * N, N);
    const double top = seg.cwiseAbs().maxCoeff();
    if (top == 0.0) continue;
    const double tail = std::max(std::abs(seg[N - 1]), std::abs(seg[N - 2]));
    worst = std::max(worst, tail / top);
  }
  return worst;
}

namespace {

// int_a^b log|y - z| / (x - y)^2 dy for x outside [a,b], z inside (a,b).
double log_kernel_moment(double x, double z, double a, double b) {
  auto prim = [&](double y) {
    return std::log(std::abs(y - z)) / (x - y) -
           (std::log(std::abs(y - z)) - std::log(std::abs(x - y))) / (x - z);
  };
  return prim(b) - prim(a);
}

}  // namespace

NumericGreen::NumericGreen(std::shared_ptr<const SpectralDirichlet> solver, double z,
                           double lift_step, int cross_quad)
    : solver_(std::move(solver)), z_(z) {
  const IntervalUnion& I = solver_->domain();
  const double dist = I.dist_to_complement(z);
  if (!(dist > 0.0)) throw std::invalid_argument("NumericGreen: z not inside the domain");
  if (dist < 1e-6 * I.diameter()) throw std::runtime_error("source unresolved");
  comp_ = I.component_of(z);
  split_ = I.components() >= 2;

  if (split_) {
    // remainder solves (-Delta)^{1/2} u = w in the other components, 0 in the
    // source component, with w the kernel integral of the component Green function
    const auto [a0, b0] = I.component(comp_);
    const double mid = 0.5 * (a0 + b0), half = 0.5 * (b0 - a0);
    const int Q0 = cross_quad;
    auto rhs = [&, this](double x) -> double {
      if (I.component_of(x) == comp_) return 0.0;
      double acc = 0.0;  // int H^{k0}(y,z)/(x-y)^2 dy in the theta variable
      for (int q = 0; q < Q0; ++q) {
        const double th = (q + 0.5) * kPi / Q0;
        const double y = mid + half * std::cos(th);
        const double dy = half * std::sin(th) * kPi / Q0;
        acc += regular_part_single(y, z_, a0, b0) / ((x - y) * (x - y)) * dy;
      }
      acc += -2.0 * log_kernel_moment(x, z_, a0, b0);
      return acc / kPi;
    };
    utilde_ = solver_->solve(rhs);
  } else {
    rho_ = 0.5 * dist;
    TailModel far{0.0, 2.0, 0.0, 1.0, z_};
    SmoothHalfLap op([this](double x) { return lift(x); }, ExteriorClosure::tails(far, far), z_,
                     rho_, rho_ * lift_step);
    utilde_ = solver_->solve([&op](double x) { return -op.at(x); });
  }
}

double NumericGreen::lift(double x) const {
  // smooth mollification of 2 log|x - z|: exact beyond the bump support
  const double u = (x - z_) / rho_;
  double s = 0.0;
  if (std::abs(u) < 1.0) s = rho_ * std::exp(1.0 - 1.0 / (1.0 - u * u));
  return std::log((x - z_) * (x - z_) + s * s);
}

double NumericGreen::H(double x) const {
  if (split_) {
    const auto [a0, b0] = solver_->domain().component(comp_);
    return regular_part_single(x, z_, a0, b0) + utilde_(x);
  }
  return lift(x) + utilde_(x);
}

double NumericGreen::G(double x, double min_sep) const {
  if (std::abs(x - z_) <= min_sep)
    throw std::invalid_argument("NumericGreen: x inside the source cell");
  return H(x) - 2.0 * std::log(std::abs(x - z_));
}

GreenTable::GreenTable(IntervalUnion domain, int modes_per_component)
    : domain_(std::move(domain)), closed_form_(domain_.components() == 1) {
  if (!closed_form_)
    solver_ = std::make_shared<SpectralDirichlet>(domain_, modes_per_component);
}

const NumericGreen& GreenTable::source(double z) const {
  std::lock_guard<std::mutex> lock(mutex_);
  const long long key = std::llround(z * 0x1p30);
  auto it = cache_.find(key);
  if (it == cache_.end())
    it = cache_.emplace(key, std::make_shared<const NumericGreen>(solver_, z)).first;
  return *it->second;
}

double GreenTable::H(double x, double z) const {
  if (closed_form_) {
    const auto& [a, b] = domain_.component(0);
    return regular_part_single(x, z, a, b);
  }
  return source(z).H(x);
}

double GreenTable::G(double x, double z) const {
  if (closed_form_) {
    const auto& [a, b] = domain_.component(0);
    return green_single(x, z, a, b);
  }
  return source(z).G(x);
}

double GreenTable::robin(double z) const { return H(z, z); }

double GreenTable::symmetry_error(const std::vector<std::pair<double, double>>& pairs) const {
  double worst = 0.0;
  for (const auto& [x, z] : pairs) {
    if (!domain_.contains(x) || !domain_.contains(z) || x == z) continue;
    worst = std::max(worst, std::abs(G(x, z) - G(z, x)));
  }
  return worst;
}

std::string GreenTable::to_csv(int points_per_component) const {
  std::vector<double> zs;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (const auto& [key, src] : cache_) zs.push_back(src->z());
  }
  if (zs.empty()) {
    // default sources: component midpoints
    for (int k = 0; k < domain_.components(); ++k) {
      const auto& [a, b] = domain_.component(k);
      zs.push_back(0.5 * (a + b));
    }
  }
  std::ostringstream os;
  os.precision(17);
  os << "x,z,G,H\n";
  for (double z : zs) {
    for (int k = 0; k < domain_.components(); ++k) {
      const auto& [a, b] = domain_.component(k);
      for (int i = 0; i < points_per_component; ++i) {
        const double x = a + (b - a) * (i + 0.5) / points_per_component;
        if (std::abs(x - z) < 1e-9) continue;
        os << x << "," << z << "," << G(x, z) << "," << H(x, z) << "\n";
      }
    }
  }
  return os.str();
}

GreenLowerBoundReport green_lower_bound_check(
    const GreenTable& table, const std::vector<std::pair<double, double>>& pairs) {
  GreenLowerBoundReport rep;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  const IntervalUnion& I = table.domain();
  for (const auto& [x, y] : pairs) {
    if (!I.contains(x) || !I.contains(y) || x == y) continue;
    const double denom =
        std::log(1.0 + std::sqrt(I.dist_to_complement(x) * I.dist_to_complement(y)) /
                           std::abs(x - y));
    if (!(denom > 0.0)) continue;
    rep.min_ratio = std::min(rep.min_ratio, table.G(x, y) / denom);
    ++rep.pairs;
  }
  rep.positive = rep.pairs > 0 && rep.min_ratio > 0.0;
  return rep;
}

}  // namespace liou
