#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "liou/domain.hpp"
#include "liou/greens.hpp"

namespace liou {

/// Reduced energy
///   Xi(xi) = - sum_j ( 2 log kappa(xi_j) + H(xi_j,xi_j) + sum_{i!=j} G(xi_j,xi_i) ),
/// with a -inf sentinel on the diagonal set (coincident points).
double xi_energy(const std::vector<double>& xi, const KappaField& kappa, const GreenTable& greens);

/// Landscape of Xi over the product of assigned components, with its cached
/// product-grid evaluation and the interior minimizer estimate.
class XiLandscape {
public:
  /// beta[j] = component index hosting xi_j; delta is the margin of Q_delta.
  XiLandscape(const IntervalUnion& domain, const KappaField& kappa,
              std::shared_ptr<const GreenTable> greens, std::vector<int> beta, double delta);

  double operator()(const std::vector<double>& xi) const;  // +inf outside Q_delta
  int m() const { return static_cast<int>(beta_.size()); }
  const std::vector<int>& beta() const { return beta_; }
  double delta() const { return delta_; }
  std::pair<double, double> box(int j) const;  // coordinate bounds of Q_delta

  /// Evaluate over a product grid (cache rows: xi_1..xi_m, Xi).
  void tabulate(int points_per_dim);
  const std::vector<std::vector<double>>& cache() const { return cache_; }

  const std::optional<std::vector<double>>& minimizer() const { return min_xi_; }
  double min_value() const { return min_val_; }
  void set_minimizer(std::vector<double> xi, double val);

private:
  const IntervalUnion& domain_;
  const KappaField& kappa_;
  std::shared_ptr<const GreenTable> greens_;
  std::vector<int> beta_;
  double delta_;
  std::vector<std::vector<double>> cache_;
  std::optional<std::vector<double>> min_xi_;
  double min_val_ = 0.0;
};

/// Interior local minimizer of Xi in Q_delta: Nelder-Mead simplex with +inf
/// penalty outside, followed by coordinate-wise golden-section polish. Errors
/// if the minimizer lands on the margin.
ConfigPoint minimize_xi(XiLandscape& landscape, double tol, double delta0_out,
                        unsigned int seed = 0);

/// J_eps(u) = (1/4pi) iint |u(x)-u(x')|^2/(x-x')^2 - eps int_I kappa e^u for a
/// grid function vanishing outside I. O(n^2); meant for coarse grids.
double full_energy(const GridFunction& u, double eps, const KappaField& kappa,
                   const IntervalUnion& domain);

/// Generic derivative-free minimization used by the reduced problem and the
/// outer loop: Nelder-Mead with restarts inside box constraints.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> start,
                                const std::vector<std::pair<double, double>>& box, double tol,
                                int max_iter = 400, unsigned int seed = 0);

}  // namespace liou
