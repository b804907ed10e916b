#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace liou {

/// Union of finitely many disjoint bounded open intervals (a_1,b_1) ∪ ... ∪ (a_d,b_d),
/// ordered so that a_1 < b_1 < a_2 < ... < a_d < b_d.
class IntervalUnion {
public:
  explicit IntervalUnion(std::vector<std::pair<double, double>> endpoints);

  int components() const { return static_cast<int>(comps_.size()); }
  const std::pair<double, double>& component(int k) const { return comps_.at(k); }
  const std::vector<std::pair<double, double>>& endpoints() const { return comps_; }

  double left() const { return comps_.front().first; }
  double right() const { return comps_.back().second; }
  /// D = max(|a_1|, |b_d|).
  double diameter() const;
  double measure() const;

  bool contains(double x) const;
  /// Index of the component containing x, or -1.
  int component_of(double x) const;
  /// dist(x, R \ I); zero for x outside I.
  double dist_to_complement(double x) const;

  IntervalUnion scaled(double factor) const;

  /// Flat "a1,b1,a2,b2,..." form used in config files.
  static IntervalUnion from_string(const std::string& flat);
  std::string to_string() const;

private:
  std::vector<std::pair<double, double>> comps_;
};

/// I_eps = { x/eps : x in I }. Throws for eps <= 0.
IntervalUnion expand_domain(const IntervalUnion& domain, double eps);

/// Uniform grid of n nodes on [a, b], node(i) = a + i*h.
class Grid {
public:
  Grid(double a, double b, int n);

  /// Window covering the domain with the given margin factor beyond its diameter,
  /// spacing close to target_h. Node count is forced odd so symmetric domains get a
  /// symmetric grid with a central node.
  static Grid cover(const IntervalUnion& domain, double target_h, double margin_factor = 3.0);

  double a() const { return a_; }
  double b() const { return b_; }
  int n() const { return n_; }
  double h() const { return h_; }
  double node(int i) const { return a_ + h_ * i; }
  bool in_window(double x) const { return x >= a_ && x <= b_; }
  /// Nearest node index, clamped to [0, n).
  int nearest(double x) const;

private:
  double a_, b_, h_;
  int n_;
};

/// Far-field model c0 + clog*log|x - xc| + calg*|x - xc|^(-p), one per side.
struct TailModel {
  double c0 = 0.0;
  double clog = 0.0;
  double calg = 0.0;
  double p = 1.0;
  double xc = 0.0;

  double eval(double x) const;
};

/// Rule for evaluating a grid function beyond its window: either the two-sided
/// algebraic/log tail model or an exact analytic formula.
class ExteriorClosure {
public:
  static ExteriorClosure zero();
  static ExteriorClosure constant(double c);
  static ExteriorClosure tails(TailModel left, TailModel right);
  static ExteriorClosure analytic(std::function<double(double)> fn);

  double eval(double x) const;
  bool is_analytic() const { return static_cast<bool>(fn_); }

  /// Points left of this abscissa use the left tail model. Set automatically to
  /// the window midpoint when the closure is attached to a GridFunction.
  void set_split(double s) { split_ = s; }

  /// Integral_Z^inf u(x0 + side*z) / z^2 dz, side = +1 (right) or -1 (left).
  /// Requires that x0 + side*Z is already beyond the window served by this closure.
  double tail_integral(double x0, double Z, int side) const;

private:
  TailModel left_{}, right_{};
  std::function<double(double)> fn_;
  double split_ = 0.0;
};

/// Values on a uniform grid plus an exterior closure rule beyond the window.
class GridFunction {
public:
  GridFunction(Grid grid, Eigen::VectorXd values, ExteriorClosure closure);
  /// Sample fn at the grid nodes; closure defaults to the same formula.
  static GridFunction sample(const Grid& grid, const std::function<double(double)>& fn);
  static GridFunction zeros(const Grid& grid);

  const Grid& grid() const { return grid_; }
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::VectorXd& values() { return values_; }
  const ExteriorClosure& closure() const { return closure_; }
  void set_closure(ExteriorClosure c) {
    c.set_split(0.5 * (grid_.a() + grid_.b()));
    closure_ = std::move(c);
  }

  double value(int i) const { return values_[i]; }
  /// Cubic interpolation inside the window, closure outside. Exact at nodes.
  double operator()(double x) const;

  bool all_finite() const;
  double sup_norm() const { return values_.cwiseAbs().maxCoeff(); }

private:
  Grid grid_;
  Eigen::VectorXd values_;
  ExteriorClosure closure_;
};

/// Coefficient kappa with inf_I kappa > 0; constant, polynomial, or tabulated.
class KappaField {
public:
  static KappaField constant(double c);
  /// kappa(x) = c0 + c1 x + c2 x^2 + ...
  static KappaField polynomial(std::vector<double> coeffs);
  static KappaField tabulated(std::vector<double> xs, std::vector<double> vals);

  double operator()(double x) const;
  double deriv(double x) const;

  /// Throws if the sampled infimum over the closure of I is <= 0.
  void validate_positive(const IntervalUnion& domain, int samples_per_component = 257) const;

  std::string describe() const;

private:
  enum class Kind { Constant, Polynomial, Tabulated } kind_ = Kind::Constant;
  std::vector<double> coeffs_{1.0};
  std::vector<double> xs_, vals_;
};

/// Candidate concentration points: each xi_k at distance >= delta0 from R \ I and
/// pairwise separated by >= delta0.
struct ConfigPoint {
  std::vector<double> xi;
  double delta0 = 0.1;

  int m() const { return static_cast<int>(xi.size()); }
  void validate(const IntervalUnion& domain) const;
  bool admissible(const IntervalUnion& domain) const;
};

/// Weighted sup norm: sup over grid nodes in I_eps of
/// |f(y)| / ( eps + sum_j (1 + |y - eta_j|)^(-1-sigma) ).
double star_norm(const GridFunction& f, const IntervalUnion& domain_eps, double sigma,
                 const std::vector<double>& eta, double eps);

}  // namespace liou
