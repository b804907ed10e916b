#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "liou/domain.hpp"
#include "liou/fracops.hpp"

namespace liou {

/// Fundamental solution Gamma(x) = -2 log|x|. Throws at x = 0.
double gamma_fs(double x);

/// Green function of (-Delta)^(1/2) on a single interval (a,b): the (-1,1)
/// closed form transplanted by the affine map. Zero for x outside (a,b).
double green_single(double x, double z, double a, double b);

/// Regular part H = G - Gamma on (a,b), extended continuously to x = z.
/// On the diagonal of (-1,1): H(x,x) = 2 log(2(1-x^2)).
double regular_part_single(double x, double z, double a, double b);

/// Zero-exterior Dirichlet solver in the edge-weighted Chebyshev basis
///   phi_{k,n}(x) = sqrt(1 - t^2) U_n(t),  t = affine map of component k,
/// for which the half-Laplacian acts diagonally within a component. Smooth
/// right-hand sides yield spectral accuracy and evaluation at arbitrary points.
class SpectralDirichlet {
public:
  SpectralDirichlet(IntervalUnion domain, int modes_per_component = 96,
                    int quad_per_component = 0);

  const IntervalUnion& domain() const { return domain_; }
  int modes() const { return modes_; }

  class Solution {
  public:
    /// Value at any real point; identically zero outside the domain.
    double operator()(double x) const;
    const Eigen::VectorXd& coeffs() const { return coeffs_; }
    /// Magnitude of the last retained coefficient relative to the largest,
    /// a cheap resolution indicator per component.
    double tail_indicator() const;

  private:
    friend class SpectralDirichlet;
    const SpectralDirichlet* owner_ = nullptr;
    Eigen::VectorXd coeffs_;
  };

  Solution solve(const std::function<double(double)>& rhs) const;

private:
  IntervalUnion domain_;
  int modes_, quad_;
  std::vector<double> theta_;                 // quadrature angles
  std::vector<Eigen::MatrixXd> test_;         // per component: N x Q, U_m(s_q) * w_q
  Eigen::MatrixXd A_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// H(.,z) and G(.,z) on an interval union via the spectral zero-exterior solve.
///
/// For d >= 2 the log singularity is carried exactly by the closed-form Green
/// function of the source component, so the solved remainder has an analytic
/// right-hand side (the cross-component kernel integral). For d = 1 that split
/// is vacuous; a smooth mollified lift of the exterior datum is used instead,
/// keeping the path genuinely numeric so it can be tested against the closed
/// form.
class NumericGreen {
public:
  /// lift_step is the quadrature step for the d = 1 lift's half-Laplacian,
  /// relative to the mollification radius; cross_quad the node count of the
  /// cross-component kernel quadrature used for d >= 2.
  NumericGreen(std::shared_ptr<const SpectralDirichlet> solver, double z,
               double lift_step = 3e-3, int cross_quad = 768);

  double z() const { return z_; }
  double H(double x) const;
  /// G = H + Gamma(x-z); refuses |x - z| < min_sep (the source cell).
  double G(double x, double min_sep = 0.0) const;

private:
  std::shared_ptr<const SpectralDirichlet> solver_;
  double z_, rho_ = 0.0;
  int comp_ = 0;
  bool split_ = false;
  SpectralDirichlet::Solution utilde_;
  double lift(double x) const;
};

/// Table of Green data for one domain: exact closed form when d = 1, numeric
/// (spectral) per source otherwise. Per-source solves share one factorization
/// and are cached; the table is immutable through the read interface.
class GreenTable {
public:
  GreenTable(IntervalUnion domain, int modes_per_component = 96);

  const IntervalUnion& domain() const { return domain_; }
  bool closed_form() const { return closed_form_; }

  double H(double x, double z) const;
  double G(double x, double z) const;
  /// Robin diagnostic H(z,z).
  double robin(double z) const;

  /// max |G(x,z) - G(z,x)| over the given sample pairs.
  double symmetry_error(const std::vector<std::pair<double, double>>& pairs) const;

  /// CSV rows (x,z,G,H) over a node sample for each cached source.
  std::string to_csv(int points_per_component = 33) const;

private:
  IntervalUnion domain_;
  bool closed_form_;
  std::shared_ptr<const SpectralDirichlet> solver_;
  mutable std::map<long long, std::shared_ptr<const NumericGreen>> cache_;
  mutable std::mutex mutex_;
  const NumericGreen& source(double z) const;
};

struct GreenLowerBoundReport {
  double min_ratio = 0.0;
  std::size_t pairs = 0;
  bool positive = false;
};

/// Empirical check of G(x,y) >= c * log(1 + sqrt(d(x) d(y)) / |x-y|): reports the
/// minimal ratio over the sample and whether it stayed positive.
GreenLowerBoundReport green_lower_bound_check(const GreenTable& table,
                                              const std::vector<std::pair<double, double>>& pairs);

}  // namespace liou
