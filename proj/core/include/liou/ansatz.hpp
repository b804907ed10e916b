#pragma once

#include <vector>

#include "liou/domain.hpp"
#include "liou/fracops.hpp"
#include "liou/greens.hpp"

namespace liou {

/// One bubble log(2 mu / (mu^2 + (x - xi)^2)).
struct BubbleParams {
  double mu = 1.0;
  double xi = 0.0;
};

double bubble(const BubbleParams& p, double x);
/// Exact half-Laplacian of the bubble: 2 mu / (mu^2 + (x - xi)^2).
double bubble_halflap(const BubbleParams& p, double x);

/// One construction instance: (eps, m, xi, sigma, kappa) on a domain, plus the
/// discretization controls.
struct BlowupConfig {
  IntervalUnion domain{{{-1.0, 1.0}}};
  KappaField kappa = KappaField::constant(1.0);
  ConfigPoint xi{{0.0}, 0.3};
  double eps = 0.05;
  double sigma = 0.25;
  double rbar = 10.0;       // cutoff radius of the kernel basis
  double grid_hy = 0.0625;  // expanded-grid spacing target
  double grid_hx = 2e-3;    // original-variable grid spacing target (exports, verify)
  bool audit_mode = false;  // lifts the m <= d and one-point-per-component rules

  int m() const { return xi.m(); }
  void validate() const;
};

/// mu_j = (1/2) exp( log kappa(xi_j) + H(xi_j,xi_j) + sum_{i != j} G(xi_j,xi_i) ).
std::vector<double> mu_vector(const ConfigPoint& xi, const KappaField& kappa,
                              const GreenTable& greens);

/// The ansatz in expanded variables y = x/eps, assembled from per-bubble
/// zero-exterior corrector solves on the expanded grid:
///   V = 2 log eps + sum_j utilde_j,
/// where utilde_j solves (-Delta)^{1/2} u = 2 mu_j/(mu_j^2 + (y-eta_j)^2) in
/// I_eps with u = 0 outside. Each u_j + H_j equals utilde_j(x/eps) in original
/// variables, so U vanishes outside I by construction.
struct AnsatzBundle {
  BlowupConfig cfg;
  std::vector<double> mu, eta;
  IntervalUnion domain_eps{{{-1.0, 1.0}}};
  Grid grid_y{-1.0, 1.0, 5};
  std::vector<GridFunction> corrector;  // utilde_j on grid_y
  GridFunction V{Grid{-1.0, 1.0, 5}, Eigen::VectorXd::Zero(5), ExteriorClosure::zero()};
  GridFunction W{Grid{-1.0, 1.0, 5}, Eigen::VectorXd::Zero(5), ExteriorClosure::zero()};
  GridFunction theta{Grid{-1.0, 1.0, 5}, Eigen::VectorXd::Zero(5), ExteriorClosure::zero()};
  double corrector_residual = 0.0;  // sup of flagged Dirichlet residuals
  bool flagged = false;

  /// Sum of the analytic bubble potentials 2 mu_j / (mu_j^2 + (y - eta_j)^2).
  double bubble_potential(double y) const;
  /// Expanded ansatz at arbitrary y (2 log eps outside I_eps).
  double V_at(double y) const;
  /// Original-variable ansatz U(x) = V(x/eps) - 2 log eps; exactly 0 outside I.
  double U_at(double x) const;
  /// Per-bubble pieces in original variables.
  double u_j(int j, double x) const;
  double H_j(int j, double x) const;
  /// U sampled on a grid, exterior nodes clamped to exactly zero.
  GridFunction U_field(const Grid& gx) const;
};

/// Expanded grid shared by all solves of one configuration.
Grid make_expanded_grid(const BlowupConfig& cfg);

AnsatzBundle build_bundle(const BlowupConfig& cfg, const DirichletSystem& ysolver,
                          const GreenTable& greens);

/// Variant with externally prescribed mu (falsification fixtures).
AnsatzBundle build_bundle_with_mu(const BlowupConfig& cfg, const DirichletSystem& ysolver,
                                  std::vector<double> mu);

/// E(y) = (-Delta)^{1/2} V - kappa(eps y) e^V on the interior nodes of I_eps,
/// zero elsewhere. The bubble part of the operator is analytic; the corrector
/// part re-applies the pointwise evaluator to the solved fields.
GridFunction error_field(const AnsatzBundle& b, const DirichletSystem& ysolver);

/// N(phi) = W (e^phi - 1 - phi) pointwise on I_eps. Throws when phi leaves the
/// contraction regime.
GridFunction nonlinearity(const AnsatzBundle& b, const GridFunction& phi);

}  // namespace liou
