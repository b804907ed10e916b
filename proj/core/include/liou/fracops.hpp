#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "liou/domain.hpp"

namespace liou {

/// Principal-value quadrature for (-Delta)^(1/2) on a uniform grid.
///
/// The symmetric second difference D(z) = 2f(x) - f(x+z) - f(x-z) makes
/// D(z)/z^2 bounded and even, so the PV integral is discretized by the
/// composite midpoint rule on cells of width h away from the origin, a
/// second-difference (Taylor) cell at the origin, and an analytic tail from
/// the exterior closure beyond the window.
struct PVQuadrature {
  /// Regularization radius of the origin cell, in nodes.
  int delta = 1;

  void validate() const;

  /// Midpoint weight attached to D(kh)/(kh)^2.
  static double cell_weight(int k, double h) { return 1.0 / (static_cast<double>(k) * k * h); }
  /// Exact integral of 1/z^2 over the cell [kh - h/2, kh + h/2].
  static double cell_weight_exact(int k, double h) {
    return 1.0 / ((static_cast<double>(k) * k - 0.25) * h);
  }
};

/// Pointwise evaluator for (-Delta)^(1/2) f at grid nodes. Construction
/// precomputes the 1/k^2 table; evaluation at one node costs O(n).
class HalfLapEvaluator {
public:
  HalfLapEvaluator(const GridFunction& f, PVQuadrature q = {});

  /// Value at node i; requires delta <= i <= n-1-delta.
  double at_node(int i) const;

private:
  const GridFunction& f_;
  PVQuadrature q_;
  std::vector<double> invk2_;
};

/// (-Delta)^(1/2) f at x, which must lie within h/4 of a grid node strictly
/// inside the window. Throws on non-finite data or out-of-window x.
double eval_halflap(const GridFunction& f, double x, const PVQuadrature& q = {});

/// Dense collocation system for the Dirichlet problem
///   (-Delta)^(1/2) u = h  in I,  u = g  in R \ I,
/// on the interior nodes of I. The matrix is full (the operator is nonlocal);
/// it is assembled and LU-factorized once and reused across right-hand sides.
class DirichletSystem {
public:
  DirichletSystem(IntervalUnion domain, Grid grid, PVQuadrature q = {});

  const IntervalUnion& domain() const { return domain_; }
  const Grid& grid() const { return grid_; }
  const std::vector<int>& interior() const { return interior_; }
  const Eigen::MatrixXd& matrix() const { return A_; }
  const PVQuadrature& quadrature() const { return q_; }

  struct Solution {
    GridFunction u;
    double residual_sup = 0.0;
    bool flagged = false;
  };

  /// Solve with interior right-hand side h_rhs (read at interior nodes) and
  /// exterior data g_ext (read at exterior nodes and through its closure).
  /// The returned function equals g_ext outside I. check_residual re-applies
  /// the independent pointwise evaluator; above tolerance the result is
  /// flagged, not silenced.
  Solution solve(const GridFunction& h_rhs, const GridFunction& g_ext,
                 bool check_residual = true) const;

  /// Right-hand-side contribution of exterior data to each interior row.
  Eigen::VectorXd exterior_load(const GridFunction& g_ext) const;

  /// Residual acceptance tolerance (10 h by default).
  double residual_tol() const { return 10.0 * grid_.h(); }

private:
  IntervalUnion domain_;
  Grid grid_;
  PVQuadrature q_;
  std::vector<int> interior_;
  std::vector<int> interior_of_node_;  // node index -> interior rank or -1
  Eigen::MatrixXd A_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// (-Delta)^(1/2) of a globally smooth function given in closed form, evaluated
/// pointwise on a virtual uniform mesh of the requested step. The closure must
/// describe fn exactly beyond distance R_far from center; everything farther out
/// is integrated analytically through it.
class SmoothHalfLap {
public:
  SmoothHalfLap(std::function<double(double)> fn, ExteriorClosure far, double center,
                double R_far, double step = 1e-3);

  double at(double x) const;

private:
  std::function<double(double)> fn_;
  ExteriorClosure far_;
  double center_, R_far_, step_;
};

/// Fourier multiplier |n| of the half-Laplacian on the unit circle, modes |n| <= M.
struct CircleSpectrum {
  int modes;

  explicit CircleSpectrum(int M);
  double multiplier(int n) const { return std::abs(n); }
};

/// Coefficient-space application: coefficient n (indexed n = -M..M as
/// phi_hat[n + M]) is multiplied by |n|.
std::vector<std::complex<double>> circle_halflap(const std::vector<std::complex<double>>& phi_hat);

}  // namespace liou
