#include "liou/ansatz.hpp"

#include <cmath>
#include <stdexcept>

namespace liou {

double bubble(const BubbleParams& p, double x) {
  if (!(p.mu > 0.0)) throw std::invalid_argument("bubble: mu must be positive");
  const double r = x - p.xi;
  return std::log(2.0 * p.mu / (p.mu * p.mu + r * r));
}

double bubble_halflap(const BubbleParams& p, double x) {
  const double r = x - p.xi;
  return 2.0 * p.mu / (p.mu * p.mu + r * r);
}

void BlowupConfig::validate() const {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("sigma must lie in (0,1)");
  if (!(rbar > 0.0)) throw std::invalid_argument("rbar must be positive");
  kappa.validate_positive(domain);
  xi.validate(domain);
  if (!audit_mode) {
    if (m() > domain.components()) throw std::invalid_argument("m <= d required");
    std::vector<int> used(domain.components(), 0);
    for (double x : xi.xi)
      if (++used[domain.component_of(x)] > 1)
        throw std::invalid_argument("construction mode places one point per component");
  }
}

std::vector<double> mu_vector(const ConfigPoint& xi, const KappaField& kappa,
                              const GreenTable& greens) {
  const int m = xi.m();
  std::vector<double> mu(m);
  for (int j = 0; j < m; ++j) {
    double expo = std::log(kappa(xi.xi[j])) + greens.robin(xi.xi[j]);
    for (int i = 0; i < m; ++i)
      if (i != j) expo += greens.G(xi.xi[j], xi.xi[i]);
    mu[j] = 0.5 * std::exp(expo);
    if (!std::isfinite(mu[j])) throw std::runtime_error("mu_vector: H(xi_j,xi_j) not finite");
  }
  return mu;
}

Grid make_expanded_grid(const BlowupConfig& cfg) {
  return Grid::cover(expand_domain(cfg.domain, cfg.eps), cfg.grid_hy, 3.0);
}

namespace {

AnsatzBundle assemble(const BlowupConfig& cfg, const DirichletSystem& ysolver,
                      std::vector<double> mu) {
  AnsatzBundle b{cfg,
                 std::move(mu),
                 {},
                 expand_domain(cfg.domain, cfg.eps),
                 ysolver.grid(),
                 {},
                 GridFunction::zeros(ysolver.grid()),
                 GridFunction::zeros(ysolver.grid()),
                 GridFunction::zeros(ysolver.grid()),
                 0.0,
                 false};
  const int m = cfg.m();
  b.eta.resize(m);
  for (int j = 0; j < m; ++j) b.eta[j] = cfg.xi.xi[j] / cfg.eps;

  const Grid& gy = ysolver.grid();
  GridFunction zeros = GridFunction::zeros(gy);
  b.corrector.reserve(m);
  for (int j = 0; j < m; ++j) {
    BubbleParams p{b.mu[j], b.eta[j]};
    GridFunction rhs = GridFunction::sample(gy, [&](double y) { return bubble_halflap(p, y); });
    auto sol = ysolver.solve(rhs, zeros, true);
    b.corrector_residual = std::max(b.corrector_residual, sol.residual_sup);
    b.flagged = b.flagged || sol.flagged;
    b.corrector.push_back(std::move(sol.u));
  }

  const double base = 2.0 * std::log(cfg.eps);
  Eigen::VectorXd v(gy.n()), w(gy.n()), th(gy.n());
  for (int i = 0; i < gy.n(); ++i) {
    const double y = gy.node(i);
    double vi = base;
    for (int j = 0; j < m; ++j) vi += b.corrector[j].value(i);
    v[i] = vi;
    w[i] = cfg.kappa(cfg.eps * y) * std::exp(vi);
    th[i] = w[i] - b.bubble_potential(y);
  }
  b.V = GridFunction(gy, std::move(v), ExteriorClosure::constant(base));
  b.W = GridFunction(gy, std::move(w), ExteriorClosure::analytic([cfg, base](double y) {
                       return cfg.kappa(cfg.eps * y) * std::exp(base);
                     }));
  b.theta = GridFunction(gy, std::move(th), ExteriorClosure::zero());
  return b;
}

}  // namespace

AnsatzBundle build_bundle(const BlowupConfig& cfg, const DirichletSystem& ysolver,
                          const GreenTable& greens) {
  cfg.validate();
  return assemble(cfg, ysolver, mu_vector(cfg.xi, cfg.kappa, greens));
}

AnsatzBundle build_bundle_with_mu(const BlowupConfig& cfg, const DirichletSystem& ysolver,
                                  std::vector<double> mu) {
  cfg.validate();
  if (static_cast<int>(mu.size()) != cfg.m())
    throw std::invalid_argument("build_bundle_with_mu: mu size mismatch");
  return assemble(cfg, ysolver, std::move(mu));
}

double AnsatzBundle::bubble_potential(double y) const {
  double s = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j)
    s += bubble_halflap(BubbleParams{mu[j], eta[j]}, y);
  return s;
}

double AnsatzBundle::V_at(double y) const {
  double v = 2.0 * std::log(cfg.eps);
  if (!domain_eps.contains(y)) return v;
  for (const auto& u : corrector) v += u(y);
  return v;
}

double AnsatzBundle::U_at(double x) const {
  if (!cfg.domain.contains(x)) return 0.0;
  return V_at(x / cfg.eps) - 2.0 * std::log(cfg.eps);
}

double AnsatzBundle::u_j(int j, double x) const {
  const double r = x - cfg.xi.xi[j];
  return std::log(2.0 * mu[j] /
                  (cfg.kappa(cfg.xi.xi[j]) * (mu[j] * mu[j] * cfg.eps * cfg.eps + r * r)));
}

double AnsatzBundle::H_j(int j, double x) const {
  // u_j + H_j = utilde_j(x/eps)
  double uj = (domain_eps.contains(x / cfg.eps)) ? corrector[j](x / cfg.eps) : 0.0;
  return uj - u_j(j, x);
}

GridFunction AnsatzBundle::U_field(const Grid& gx) const {
  Eigen::VectorXd vals(gx.n());
  for (int i = 0; i < gx.n(); ++i) vals[i] = U_at(gx.node(i));
  return GridFunction(gx, std::move(vals), ExteriorClosure::zero());
}

GridFunction error_field(const AnsatzBundle& b, const DirichletSystem& ysolver) {
  const Grid& gy = b.grid_y;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(gy.n());
  // discrete half-Laplacian of each corrector minus its exact right-hand side;
  // near machine zero at the collocation nodes, kept so the field is exactly
  // the evaluator applied to V
  std::vector<HalfLapEvaluator> evs;
  evs.reserve(b.corrector.size());
  for (const auto& u : b.corrector) evs.emplace_back(u, ysolver.quadrature());
  for (int i : ysolver.interior()) {
    const double y = gy.node(i);
    double hl = 0.0;
    for (std::size_t j = 0; j < b.corrector.size(); ++j) {
      hl += evs[j].at_node(i) - bubble_halflap(BubbleParams{b.mu[j], b.eta[j]}, y);
    }
    e[i] = b.bubble_potential(y) + hl - b.W.value(i);
  }
  return GridFunction(gy, std::move(e), ExteriorClosure::zero());
}

GridFunction nonlinearity(const AnsatzBundle& b, const GridFunction& phi) {
  if (!phi.all_finite()) throw std::invalid_argument("nonlinearity: non-finite phi");
  if (phi.sup_norm() > 20.0)
    throw std::runtime_error("correction out of contraction regime");
  const Grid& gy = b.grid_y;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(gy.n());
  for (int i = 0; i < gy.n(); ++i) {
    if (!b.domain_eps.contains(gy.node(i))) continue;
    const double p = phi.value(i);
    out[i] = b.W.value(i) * (std::exp(p) - 1.0 - p);
  }
  return GridFunction(gy, std::move(out), ExteriorClosure::zero());
}

}  // namespace liou
