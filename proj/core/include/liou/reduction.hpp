#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liou/ansatz.hpp"
#include "liou/domain.hpp"
#include "liou/fracops.hpp"
#include "liou/reduced.hpp"

namespace liou {

/// Approximate-kernel elements Z_{0j}, Z_{1j} with their even C^2 cutoffs
/// chi_j = chi(. - eta_j), chi = 1 on [-Rbar, Rbar], 0 outside [-Rbar-1, Rbar+1].
struct KernelBasis {
  std::vector<double> mu, eta;
  double rbar = 10.0;

  int m() const { return static_cast<int>(mu.size()); }
  double Z0(int j, double y) const;
  double Z1(int j, double y) const;
  double chi(int j, double y) const;
  static double cutoff(double t, double rbar);

  GridFunction Z0_field(const Grid& g, int j) const;
  GridFunction Z1_field(const Grid& g, int j) const;

  /// M_{jk} = int chi_k Z_{1k} Z_{1j} over the interior nodes.
  Eigen::MatrixXd gram(const Grid& g, const std::vector<int>& interior) const;
};

KernelBasis make_basis(const AnsatzBundle& bundle);

/// Correction phi (zero outside I_eps), multipliers c, and solve diagnostics.
struct ReductionState {
  GridFunction phi{Grid{-1.0, 1.0, 5}, Eigen::VectorXd::Zero(5), ExteriorClosure::zero()};
  std::vector<double> c;
  double phi_sup = 0.0;
  int iterations = 0;
  double last_increment = 0.0;
  double saddle_residual = 0.0;  // backward error of the bordered system
  double ortho_residual = 0.0;   // quadrature orthogonality defect
  bool converged = false;
  std::string note;

  std::string to_json(double eps, const std::vector<double>& xi,
                      const std::vector<double>& mu) const;
};

/// Bordered (KKT) system [A - diag(W), -B; h B^T, 0] for the projected linear
/// problem: L phi = g + sum_j c_j chi_j Z_{1j} in I_eps, phi = 0 outside, with
/// the discrete orthogonality int phi chi_j Z_{1j} = 0 enforced exactly.
/// Factorized once; solves are reused across Picard iterations.
class ProjectedSolver {
public:
  ProjectedSolver(const DirichletSystem& ysystem, const GridFunction& W, const KernelBasis& basis);

  const DirichletSystem& system() const { return ysystem_; }
  const KernelBasis& basis() const { return basis_; }

  /// g read at the interior nodes of I_eps.
  ReductionState solve(const GridFunction& g) const;

private:
  const DirichletSystem& ysystem_;
  KernelBasis basis_;
  Eigen::MatrixXd M_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::MatrixXd B_;  // n x m sampled chi_j Z1j
};

ReductionState solve_projected(const GridFunction& g, const KernelBasis& basis,
                               const GridFunction& W, const DirichletSystem& ysystem);

struct FixedPointOptions {
  double tol_fp = 1e-10;
  int max_iter = 40;
  double ball_radius = 1.0;  // first-iterate containment check
};

/// Picard iteration phi_{k+1} = solve_projected(-E + N(phi_k)). Throws outside
/// the contraction regime (two consecutive increment growths or a first iterate
/// escaping the ball).
ReductionState fixed_point(const AnsatzBundle& bundle, const KernelBasis& basis,
                           const ProjectedSolver& solver, const GridFunction& error,
                           const FixedPointOptions& opts = {});

struct OuterOptions {
  double tol_c = 1e-6;
  int max_evals = 60;
  unsigned int seed = 0;
  FixedPointOptions fp{};
};

struct OuterResult {
  ConfigPoint xi;
  AnsatzBundle bundle;
  ReductionState state;
  double c_max = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Adjusts xi near the reduced-energy minimizer until max_j |c_j| < tol_c, by
/// derivative-free minimization of |c|^2 over Q_delta. A failure to reach tol_c
/// returns the best achieved configuration, flagged.
OuterResult outer_reduce(const BlowupConfig& cfg0, const GreenTable& greens,
                         const DirichletSystem& ysystem, const XiLandscape& landscape,
                         const OuterOptions& opts = {});

}  // namespace liou
