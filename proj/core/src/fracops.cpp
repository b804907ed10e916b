#include "liou/fracops.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace liou {

namespace {
constexpr double kInvPi = std::numbers::inv_pi;

std::vector<double> invk2_table(int n) {
  std::vector<double> t(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) t[k] = 1.0 / (static_cast<double>(k) * k);
  return t;
}
}  // namespace

void PVQuadrature::validate() const {
  if (delta < 1) throw std::invalid_argument("PVQuadrature: delta must be >= 1 node");
}

HalfLapEvaluator::HalfLapEvaluator(const GridFunction& f, PVQuadrature q)
    : f_(f), q_(q), invk2_(invk2_table(f.grid().n())) {
  q_.validate();
  if (!f.all_finite()) throw std::invalid_argument("eval_halflap: non-finite grid data");
}

double HalfLapEvaluator::at_node(int i) const {
  const Grid& g = f_.grid();
  const int n = g.n();
  const int d = q_.delta;
  if (i < d || i > n - 1 - d)
    throw std::invalid_argument("eval_halflap: node too close to the window edge");

  const double h = g.h();
  const double xi = g.node(i);
  const double fi = f_.value(i);
  const Eigen::VectorXd& v = f_.values();
  const ExteriorClosure& clo = f_.closure();

  const int kmax = std::max(i, n - 1 - i);
  double acc = 0.0;
  const int kin = std::min(i, n - 1 - i);  // both sides on-grid for k <= kin
  for (int k = d; k <= kin; ++k)
    acc += (2.0 * fi - v[i + k] - v[i - k]) * invk2_[k];
  for (int k = kin + 1; k <= kmax; ++k) {
    const double fr = (i + k < n) ? v[i + k] : clo.eval(xi + k * h);
    const double fl = (i - k >= 0) ? v[i - k] : clo.eval(xi - k * h);
    acc += (2.0 * fi - fr - fl) * invk2_[k];
  }
  acc /= h;

  // origin cell [0, (delta - 1/2) h] by the local quadratic model
  const double second = v[i + d] - 2.0 * fi + v[i - d];
  acc -= (d - 0.5) * second / (static_cast<double>(d) * d * h);

  // analytic tail beyond Z = (kmax + 1/2) h
  const double Z = (kmax + 0.5) * h;
  acc += 2.0 * fi / Z;
  acc -= clo.tail_integral(xi, Z, +1);
  acc -= clo.tail_integral(xi, Z, -1);

  return acc * kInvPi;
}

double eval_halflap(const GridFunction& f, double x, const PVQuadrature& q) {
  const Grid& g = f.grid();
  if (!g.in_window(x)) throw std::invalid_argument("eval_halflap: x outside window interior");
  const int i = g.nearest(x);
  if (std::abs(g.node(i) - x) > 0.25 * g.h())
    throw std::invalid_argument("eval_halflap: x is not a grid node");
  HalfLapEvaluator ev(f, q);
  return ev.at_node(i);
}

DirichletSystem::DirichletSystem(IntervalUnion domain, Grid grid, PVQuadrature q)
    : domain_(std::move(domain)), grid_(grid), q_(q) {
  q_.validate();
  if (grid_.a() >= domain_.left() || grid_.b() <= domain_.right())
    throw std::invalid_argument("DirichletSystem: grid window must contain the domain");

  const int n = grid_.n();
  interior_of_node_.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    if (domain_.contains(grid_.node(i))) {
      interior_of_node_[i] = static_cast<int>(interior_.size());
      interior_.push_back(i);
    }
  }
  const int m = static_cast<int>(interior_.size());
  if (m == 0) throw std::runtime_error("domain unresolved at this eps/h");

  const double h = grid_.h();
  const int d = q_.delta;
  const auto invk2 = invk2_table(n);

  A_.setZero(m, m);
  for (int r = 0; r < m; ++r) {
    const int i = interior_[r];
    const int kmax = std::max(i, n - 1 - i);
    const double Z = (kmax + 0.5) * h;
    double diag = 1.0 / Z;  // half of 2/Z, doubled below
    for (int k = d; k <= kmax; ++k) {
      const double w = invk2[k] / h;
      diag += w;
      const int jr = i + k, jl = i - k;
      if (jr < n && interior_of_node_[jr] >= 0) A_(r, interior_of_node_[jr]) -= w * kInvPi;
      if (jl >= 0 && interior_of_node_[jl] >= 0) A_(r, interior_of_node_[jl]) -= w * kInvPi;
    }
    // origin cell: -(d - 1/2) (u_{i+d} - 2 u_i + u_{i-d}) / (d^2 h)
    const double wnear = (d - 0.5) / (static_cast<double>(d) * d * h);
    diag += wnear;
    if (interior_of_node_[i + d] >= 0) A_(r, interior_of_node_[i + d]) -= wnear * kInvPi;
    if (interior_of_node_[i - d] >= 0) A_(r, interior_of_node_[i - d]) -= wnear * kInvPi;
    A_(r, r) += 2.0 * diag * kInvPi;
  }
  lu_.compute(A_);
  if (lu_.rcond() < 1e-14) throw std::runtime_error("discretization failure");
}

Eigen::VectorXd DirichletSystem::exterior_load(const GridFunction& g_ext) const {
  const int n = grid_.n();
  const int m = static_cast<int>(interior_.size());
  const double h = grid_.h();
  const int d = q_.delta;
  const auto invk2 = invk2_table(n);
  const Eigen::VectorXd& gv = g_ext.values();
  const ExteriorClosure& clo = g_ext.closure();

  Eigen::VectorXd load = Eigen::VectorXd::Zero(m);
  for (int r = 0; r < m; ++r) {
    const int i = interior_[r];
    const double xi = grid_.node(i);
    const int kmax = std::max(i, n - 1 - i);
    double acc = 0.0;
    for (int k = d; k <= kmax; ++k) {
      const double w = invk2[k] / h;
      const int jr = i + k, jl = i - k;
      if (jr >= n)
        acc += w * clo.eval(xi + k * h);
      else if (interior_of_node_[jr] < 0)
        acc += w * gv[jr];
      if (jl < 0)
        acc += w * clo.eval(xi - k * h);
      else if (interior_of_node_[jl] < 0)
        acc += w * gv[jl];
    }
    const double wnear = (d - 0.5) / (static_cast<double>(d) * d * h);
    if (interior_of_node_[i + d] < 0) acc += wnear * gv[i + d];
    if (interior_of_node_[i - d] < 0) acc += wnear * gv[i - d];

    const double Z = (kmax + 0.5) * h;
    acc += clo.tail_integral(xi, Z, +1) + clo.tail_integral(xi, Z, -1);
    load[r] = acc * kInvPi;
  }
  return load;
}

DirichletSystem::Solution DirichletSystem::solve(const GridFunction& h_rhs,
                                                 const GridFunction& g_ext,
                                                 bool check_residual) const {
  const int m = static_cast<int>(interior_.size());
  Eigen::VectorXd rhs(m);
  for (int r = 0; r < m; ++r) rhs[r] = h_rhs.value(interior_[r]);
  rhs += exterior_load(g_ext);

  const Eigen::VectorXd ui = lu_.solve(rhs);
  Eigen::VectorXd full = g_ext.values();
  for (int r = 0; r < m; ++r) full[interior_[r]] = ui[r];
  GridFunction u(grid_, std::move(full), g_ext.closure());

  Solution sol{std::move(u), 0.0, false};
  if (check_residual) {
    HalfLapEvaluator ev(sol.u, q_);
    for (int r = 0; r < m; ++r) {
      const double res = std::abs(ev.at_node(interior_[r]) - h_rhs.value(interior_[r]));
      sol.residual_sup = std::max(sol.residual_sup, res);
    }
    sol.flagged = sol.residual_sup > residual_tol();
  }
  return sol;
}

SmoothHalfLap::SmoothHalfLap(std::function<double(double)> fn, ExteriorClosure far,
                             double center, double R_far, double step)
    : fn_(std::move(fn)), far_(std::move(far)), center_(center), R_far_(R_far), step_(step) {
  if (!(R_far > 0.0) || !(step > 0.0)) throw std::invalid_argument("SmoothHalfLap: bad parameters");
  far_.set_split(center_);
}

double SmoothHalfLap::at(double x) const {
  const double h = step_;
  const int K = static_cast<int>(std::ceil((R_far_ + std::abs(x - center_)) / h)) + 2;
  const double fx = fn_(x);
  double acc = 0.0;
  for (int k = 1; k <= K; ++k) {
    const double z = k * h;
    acc += (2.0 * fx - fn_(x + z) - fn_(x - z)) / (static_cast<double>(k) * k);
  }
  acc /= h;
  acc -= (fn_(x + h) - 2.0 * fx + fn_(x - h)) / (2.0 * h);
  const double Z = (K + 0.5) * h;
  acc += 2.0 * fx / Z;
  acc -= far_.tail_integral(x, Z, +1);
  acc -= far_.tail_integral(x, Z, -1);
  return acc * kInvPi;
}

CircleSpectrum::CircleSpectrum(int M) : modes(M) {
  if (M < 0) throw std::invalid_argument("CircleSpectrum: M must be >= 0");
}

std::vector<std::complex<double>> circle_halflap(const std::vector<std::complex<double>>& phi_hat) {
  if (phi_hat.size() % 2 == 0) throw std::invalid_argument("circle_halflap: need 2M+1 coefficients");
  const int M = static_cast<int>(phi_hat.size() / 2);
  std::vector<std::complex<double>> out(phi_hat.size());
  for (int n = -M; n <= M; ++n) out[n + M] = static_cast<double>(std::abs(n)) * phi_hat[n + M];
  return out;
}

}  // namespace liou
