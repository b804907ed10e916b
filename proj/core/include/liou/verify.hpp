#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liou/ansatz.hpp"
#include "liou/domain.hpp"
#include "liou/greens.hpp"

namespace liou {

/// eps * int_I kappa e^u dx by composite midpoint with partial end cells.
double mass(const GridFunction& u, double eps, const KappaField& kappa,
            const IntervalUnion& domain);

/// Same quantity in expanded variables, int_{I_eps} W e^phi dy, where the
/// bubble cores are resolved by the expanded grid. phi may be null.
double mass_expanded(const AnsatzBundle& bundle, const GridFunction* phi = nullptr);

/// Deformation kernel for Upsilon(t) = max(t,0): zero on same-sign quadrants,
/// (1/2pi)(1 - 2 max{x,y}/|x-y|)/(x-y)^2 for xy < 0.
double pohozaev_kernel(double x, double y);

struct PohozaevReport {
  double boundary_flux = 0.0;       // (pi/4) lim_{x->1^-} w^2/(1-x), extrapolated
  double volume_term = 0.0;         // 2 int F(w) Upsilon' dx in closed form
  double deformation_energy = 0.0;  // E(w) via the kernel
  double deformation_energy_direct = 0.0;  // independent direct double sum
  double impl_agreement = 0.0;
  double residual = 0.0;  // boundary - volume + energy
  bool flagged = false;
  std::string note;
};

/// Pohozaev identity for the mean-field form on J_b = (-2b-1,-2b) u (0,1):
///   (pi/4) lim w^2/(1-x) = (2/lambda) int_0^1 (e^{lw}-1)/int e^{lw} - E(w).
PohozaevReport pohozaev_check(const GridFunction& w, double lambda, const IntervalUnion& domain);

struct HopfReport {
  double c0 = 0.0;  // inf u / (|u|_L1 min(x,1-x)^{1/2})
  double min_halflap_sample = 0.0;
  bool skipped = false;
  std::string note;
};

/// Quantitative Hopf ratio for a nonnegative superharmonic function on (0,1).
HopfReport hopf_bound_check(const GridFunction& u);

struct L1LowerBoundReport {
  double integral = 0.0;  // int_J U
  double ratio = 0.0;     // integral / (m log(1+delta0))
  bool positive = false;
};

L1LowerBoundReport l1_lower_bound_check(const AnsatzBundle& bundle, double delta0);

struct NondegeneracyReport {
  int kernel_dim = 0;           // modes with |n| - 1 = 0
  double lift_error = 0.0;      // stereographic pullback identities
  double energy_rel_err0 = 0.0; // [phi0]^2 = 2 pi int J phi0^2
  double energy_rel_err1 = 0.0;
  std::vector<double> rescaling_residuals;  // L_{mu} Z_i residuals per mu
  bool pass = false;
};

/// Circle multiplier |n| - 1 kernel, stereographic lift identities, the
/// H^{1/2} energy identity for phi_0, phi_1, and the mu-rescaling reduction.
NondegeneracyReport nondegeneracy_check(double mu, int modes);

struct BarrierReport {
  std::vector<double> radii;
  std::vector<double> values;       // (-Delta)^{1/2} w_sigma at the radii
  double r0 = 0.0;                  // empirical onset of negativity
  double envelope_exponent = 0.0;   // fit of log(-value) vs log r
  double gamma_quadrature = 0.0;    // lim y^{1+sigma} (-Delta)^{1/2} w_sigma
  double gamma_kernel_over_pi = 0.0;  // -(1/pi) int_0^1 (t^{s/2}-t^{-s/2})^2 K(t) dt
  double gamma_closed_form = 0.0;   // -sigma tan(pi sigma / 2)
  bool pass = false;
};

BarrierReport barrier_check(double sigma, const std::vector<double>& radii);

struct AuditRow {
  double eps = 0.0;
  double lambda = 0.0;
  double l1_plus = 0.0, l1_minus = 0.0;  // |w|_L1 on (0,1) and the far component
  double c0 = 0.0;
  double lhs = 0.0, rhs = 0.0;
  bool contradiction = false;
};

struct AuditReport {
  int m = 0;
  double delta0 = 0.0, delta = 0.0, b = 0.0;
  std::vector<AuditRow> rows;
  double lambda_per_bubble = 0.0;
  double m_star_estimate = 0.0;  // crossover forcing the contradiction
  bool lambda_in_band = false;   // m pi <= lambda <= 3 m pi across rows
  std::string note;
};

/// Non-existence audit on J_b: evaluates both sides of the Pohozaev chain on
/// the packed ansatz with measured constants and reports the crossover m.
AuditReport nonexistence_audit(int m, double delta0, double delta, double b,
                               const std::vector<double>& eps_list, double grid_hy = 0.0625,
                               double grid_hx = 2e-3);

}  // namespace liou
