#include "liou/reduction.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace liou {

double KernelBasis::cutoff(double t, double rbar) {
  const double a = std::abs(t);
  if (a <= rbar) return 1.0;
  if (a >= rbar + 1.0) return 0.0;
  const double s = a - rbar;
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

double KernelBasis::Z0(int j, double y) const {
  const double r = y - eta[j];
  return 1.0 / mu[j] - 2.0 * mu[j] / (mu[j] * mu[j] + r * r);
}

double KernelBasis::Z1(int j, double y) const {
  const double r = y - eta[j];
  return 2.0 * r / (mu[j] * mu[j] + r * r);
}

double KernelBasis::chi(int j, double y) const { return cutoff(y - eta[j], rbar); }

GridFunction KernelBasis::Z0_field(const Grid& g, int j) const {
  TailModel tm{1.0 / mu[j], 0.0, -2.0 * mu[j], 2.0, eta[j]};
  Eigen::VectorXd v(g.n());
  for (int i = 0; i < g.n(); ++i) v[i] = Z0(j, g.node(i));
  return GridFunction(g, std::move(v), ExteriorClosure::tails(tm, tm));
}

GridFunction KernelBasis::Z1_field(const Grid& g, int j) const {
  TailModel left{0.0, 0.0, -2.0, 1.0, eta[j]};
  TailModel right{0.0, 0.0, 2.0, 1.0, eta[j]};
  Eigen::VectorXd v(g.n());
  for (int i = 0; i < g.n(); ++i) v[i] = Z1(j, g.node(i));
  return GridFunction(g, std::move(v), ExteriorClosure::tails(left, right));
}

Eigen::MatrixXd KernelBasis::gram(const Grid& g, const std::vector<int>& interior) const {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m(), m());
  for (int i : interior) {
    const double y = g.node(i);
    for (int k = 0; k < m(); ++k) {
      const double ck = chi(k, y) * Z1(k, y);
      if (ck == 0.0) continue;
      for (int j = 0; j < m(); ++j) M(j, k) += ck * Z1(j, y);
    }
  }
  return M * g.h();
}

KernelBasis make_basis(const AnsatzBundle& bundle) {
  return KernelBasis{bundle.mu, bundle.eta, bundle.cfg.rbar};
}

std::string ReductionState::to_json(double eps, const std::vector<double>& xi,
                                    const std::vector<double>& mu) const {
  std::ostringstream os;
  os.precision(17);
  auto arr = [&os](const std::vector<double>& v) {
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "]";
  };
  os << "{\"eps\":" << eps << ",\"xi\":";
  arr(xi);
  os << ",\"mu\":";
  arr(mu);
  os << ",\"c\":";
  arr(c);
  os << ",\"phi_sup\":" << phi_sup << ",\"iterations\":" << iterations
     << ",\"residuals\":{\"saddle\":" << saddle_residual << ",\"orthogonality\":" << ortho_residual
     << ",\"last_increment\":" << last_increment << "},\"converged\":" << (converged ? "true" : "false")
     << "}";
  return os.str();
}

ProjectedSolver::ProjectedSolver(const DirichletSystem& ysystem, const GridFunction& W,
                                 const KernelBasis& basis)
    : ysystem_(ysystem), basis_(basis) {
  const auto& idx = ysystem_.interior();
  const int n = static_cast<int>(idx.size());
  const int m = basis_.m();
  const Grid& g = ysystem_.grid();

  B_.resize(n, m);
  for (int r = 0; r < n; ++r) {
    const double y = g.node(idx[r]);
    for (int j = 0; j < m; ++j) B_(r, j) = basis_.chi(j, y) * basis_.Z1(j, y);
  }

  M_.setZero(n + m, n + m);
  M_.topLeftCorner(n, n) = ysystem_.matrix();
  for (int r = 0; r < n; ++r) M_(r, r) -= W.value(idx[r]);
  M_.block(0, n, n, m) = -B_;
  M_.block(n, 0, m, n) = g.h() * B_.transpose();
  lu_.compute(M_);
  if (lu_.rcond() < 1e-14) throw std::runtime_error("resonance at this discretization");
}

ReductionState ProjectedSolver::solve(const GridFunction& g) const {
  const auto& idx = ysystem_.interior();
  const int n = static_cast<int>(idx.size());
  const int m = basis_.m();

  Eigen::VectorXd rhs(n + m);
  for (int r = 0; r < n; ++r) rhs[r] = g.value(idx[r]);
  rhs.tail(m).setZero();

  const Eigen::VectorXd sol = lu_.solve(rhs);
  ReductionState st;
  Eigen::VectorXd full = Eigen::VectorXd::Zero(ysystem_.grid().n());
  for (int r = 0; r < n; ++r) full[idx[r]] = sol[r];
  st.phi = GridFunction(ysystem_.grid(), std::move(full), ExteriorClosure::zero());
  st.c.resize(m);
  for (int j = 0; j < m; ++j) st.c[j] = sol[n + j];
  st.phi_sup = st.phi.sup_norm();
  st.saddle_residual = (M_ * sol - rhs).lpNorm<Eigen::Infinity>();
  Eigen::VectorXd ortho = ysystem_.grid().h() * (B_.transpose() * sol.head(n));
  st.ortho_residual = ortho.size() ? ortho.cwiseAbs().maxCoeff() : 0.0;
  return st;
}

ReductionState solve_projected(const GridFunction& g, const KernelBasis& basis,
                               const GridFunction& W, const DirichletSystem& ysystem) {
  ProjectedSolver solver(ysystem, W, basis);
  return solver.solve(g);
}

ReductionState fixed_point(const AnsatzBundle& bundle, const KernelBasis& basis,
                           const ProjectedSolver& solver, const GridFunction& error,
                           const FixedPointOptions& opts) {
  const Grid& gy = bundle.grid_y;
  GridFunction phi = GridFunction::zeros(gy);
  ReductionState st;
  double prev_inc = std::numeric_limits<double>::infinity();
  int growths = 0;

  for (int it = 1; it <= opts.max_iter; ++it) {
    GridFunction nphi = nonlinearity(bundle, phi);
    Eigen::VectorXd rhs_vals = nphi.values() - error.values();
    GridFunction rhs(gy, std::move(rhs_vals), ExteriorClosure::zero());
    ReductionState step = solver.solve(rhs);

    const double inc = (step.phi.values() - phi.values()).lpNorm<Eigen::Infinity>();
    phi = step.phi;
    st = std::move(step);
    st.iterations = it;
    st.last_increment = inc;

    if (it == 1 && st.phi_sup > opts.ball_radius)
      throw std::runtime_error("outside contraction regime; decrease eps or refine grid");
    if (inc < opts.tol_fp) {
      st.converged = true;
      break;
    }
    if (inc > prev_inc && ++growths >= 2)
      throw std::runtime_error("outside contraction regime; decrease eps or refine grid");
    prev_inc = inc;
  }
  st.phi = phi;
  st.phi_sup = phi.sup_norm();
  return st;
}

OuterResult outer_reduce(const BlowupConfig& cfg0, const GreenTable& greens,
                         const DirichletSystem& ysystem, const XiLandscape& landscape,
                         const OuterOptions& opts) {
  if (!landscape.minimizer())
    throw std::invalid_argument("outer_reduce: landscape has no minimizer (run minimize_xi)");

  OuterResult best;
  best.c_max = std::numeric_limits<double>::infinity();
  int evals = 0;
  const int m = static_cast<int>(landscape.minimizer()->size());
  std::vector<std::pair<double, double>> box(m);
  for (int j = 0; j < m; ++j) box[j] = landscape.box(j);

  auto run_at = [&](const std::vector<double>& xi,
                    Eigen::VectorXd* c_out = nullptr) -> double {
    BlowupConfig cfg = cfg0;
    cfg.xi.xi = xi;
    if (!cfg.xi.admissible(cfg.domain)) return std::numeric_limits<double>::infinity();
    AnsatzBundle bundle = build_bundle(cfg, ysystem, greens);
    KernelBasis basis = make_basis(bundle);
    ProjectedSolver solver(ysystem, bundle.W, basis);
    GridFunction err = error_field(bundle, ysystem);
    ReductionState st = fixed_point(bundle, basis, solver, err, opts.fp);
    ++evals;
    double cmax = 0.0, csq = 0.0;
    if (c_out) c_out->resize(m);
    for (int j = 0; j < m; ++j) {
      cmax = std::max(cmax, std::abs(st.c[j]));
      csq += st.c[j] * st.c[j];
      if (c_out) (*c_out)[j] = st.c[j];
    }
    if (cmax < best.c_max) {
      best.xi = cfg.xi;
      best.bundle = std::move(bundle);
      best.state = std::move(st);
      best.c_max = cmax;
    }
    return csq;
  };

  std::vector<double> xi = *landscape.minimizer();
  Eigen::VectorXd c(m);
  run_at(xi, &c);

  // c(xi) = 0 is the stationarity condition; chase the root with a
  // finite-difference Newton iteration before falling back to the simplex
  for (int newton = 0; newton < 8 && best.c_max >= opts.tol_c && evals < opts.max_evals;
       ++newton) {
    Eigen::MatrixXd Jac(m, m);
    bool ok = true;
    for (int j = 0; j < m; ++j) {
      const double step = 1e-4 * (box[j].second - box[j].first);
      std::vector<double> xs = xi;
      xs[j] += step;
      Eigen::VectorXd cs(m);
      if (!std::isfinite(run_at(xs, &cs))) {
        ok = false;
        break;
      }
      Jac.col(j) = (cs - c) / step;
    }
    if (!ok) break;
    Eigen::VectorXd delta = Jac.fullPivLu().solve(c);
    if (!delta.allFinite()) break;
    std::vector<double> xn = xi;
    for (int j = 0; j < m; ++j)
      xn[j] = std::clamp(xi[j] - delta[j], box[j].first, box[j].second);
    Eigen::VectorXd cn(m);
    if (!std::isfinite(run_at(xn, &cn))) break;
    if (cn.lpNorm<Eigen::Infinity>() > c.lpNorm<Eigen::Infinity>()) break;
    xi = std::move(xn);
    c = std::move(cn);
  }

  if (best.c_max >= opts.tol_c) {
    auto target = [&](const std::vector<double>& p) {
      if (evals >= opts.max_evals) return std::numeric_limits<double>::infinity();
      return run_at(p, nullptr);
    };
    nelder_mead(target, best.xi.xi.empty() ? xi : best.xi.xi, box, 1e-10, opts.max_evals,
                opts.seed);
  }

  best.evaluations = evals;
  best.converged = best.c_max < opts.tol_c;
  return best;
}

}  // namespace liou
