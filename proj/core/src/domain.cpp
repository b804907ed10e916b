#include "liou/domain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace liou {

namespace {

// Gauss-Legendre 16-point nodes/weights on [0,1].
struct GL16 {
  double x[16], w[16];
  GL16() {
    static const double xs[8] = {0.0052995325041750337, 0.0277124884633837046,
                                 0.0671843988060841224, 0.1222977958224984868,
                                 0.1910618777986781147, 0.2709916111713863151,
                                 0.3591982246103705422, 0.4524937450811812866};
    static const double ws[8] = {0.0135762297058770482, 0.0311267619693239468,
                                 0.0475792558412463928, 0.0623144856277669384,
                                 0.0747979944082883680, 0.0845782596975012679,
                                 0.0913017075224617918, 0.0947253052275342510};
    for (int i = 0; i < 8; ++i) {
      x[i] = xs[i];
      w[i] = ws[i];
      x[15 - i] = 1.0 - xs[i];
      w[15 - i] = ws[i];
    }
  }
};
const GL16 gl16;

// int_0^1 f(t) dt by composite GL16 on `panels` equal panels.
template <class F>
double gl_unit(F&& f, int panels = 1) {
  double total = 0.0;
  const double width = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double base = p * width;
    for (int q = 0; q < 16; ++q) total += gl16.w[q] * f(base + width * gl16.x[q]);
  }
  return total * width;
}

// int_Z^inf log(z + w) / z^2 dz, valid for Z > |w| (so z + w > 0 throughout).
double tail_log(double w, double Z) {
  if (std::abs(w) < 1e-8 * Z) {
    // series of (1/w) log(1 + w/Z) to avoid cancellation
    const double r = w / Z;
    return (std::log(Z + w) + 1.0 - r / 2.0 + r * r / 3.0) / Z;
  }
  return std::log(Z + w) / Z + std::log1p(w / Z) / w;
}

// int_Z^inf (z + w)^(-p) / z^2 dz via t = tau^4 on the reciprocal variable.
double tail_alg(double w, double Z, double p) {
  if (std::abs(w) >= Z)
    throw std::runtime_error("tail model center outside the resolved window");
  const double T = 1.0 / Z;
  auto f = [&](double tau) {
    const double t = T * tau * tau * tau * tau;  // t in (0, 1/Z)
    const double dt = 4.0 * T * tau * tau * tau;
    // (1/t + w)^(-p) = t^p (1 + w t)^(-p)
    return std::pow(t, p) * std::pow(1.0 + w * t, -p) * dt;
  };
  return gl_unit(f, 4);
}

}  // namespace

IntervalUnion::IntervalUnion(std::vector<std::pair<double, double>> endpoints)
    : comps_(std::move(endpoints)) {
  if (comps_.empty()) throw std::invalid_argument("IntervalUnion: no components");
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : comps_) {
    if (!(std::isfinite(a) && std::isfinite(b))) throw std::invalid_argument("IntervalUnion: endpoints not finite");
    if (!(prev < a && a < b)) throw std::invalid_argument("endpoints not increasing");
    prev = b;
  }
}

double IntervalUnion::diameter() const {
  return std::max(std::abs(left()), std::abs(right()));
}

double IntervalUnion::measure() const {
  double s = 0.0;
  for (const auto& [a, b] : comps_) s += b - a;
  return s;
}

bool IntervalUnion::contains(double x) const { return component_of(x) >= 0; }

int IntervalUnion::component_of(double x) const {
  for (int k = 0; k < components(); ++k)
    if (x > comps_[k].first && x < comps_[k].second) return k;
  return -1;
}

double IntervalUnion::dist_to_complement(double x) const {
  const int k = component_of(x);
  if (k < 0) return 0.0;
  return std::min(x - comps_[k].first, comps_[k].second - x);
}

IntervalUnion IntervalUnion::scaled(double factor) const {
  std::vector<std::pair<double, double>> out;
  out.reserve(comps_.size());
  for (const auto& [a, b] : comps_) out.emplace_back(a * factor, b * factor);
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::from_string(const std::string& flat) {
  std::vector<double> vals;
  std::stringstream ss(flat);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.find_first_not_of(" \t") == std::string::npos) continue;
    vals.push_back(std::stod(tok));
  }
  if (vals.empty() || vals.size() % 2 != 0)
    throw std::invalid_argument("domain spec must hold an even number of endpoints");
  std::vector<std::pair<double, double>> eps;
  for (size_t i = 0; i + 1 < vals.size(); i += 2) eps.emplace_back(vals[i], vals[i + 1]);
  return IntervalUnion(std::move(eps));
}

std::string IntervalUnion::to_string() const {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [a, b] : comps_) {
    if (!first) os << ",";
    os << a << "," << b;
    first = false;
  }
  return os.str();
}

IntervalUnion expand_domain(const IntervalUnion& domain, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("expand_domain: eps must be positive");
  return domain.scaled(1.0 / eps);
}

Grid::Grid(double a, double b, int n) : a_(a), b_(b), n_(n) {
  if (!(a < b) || n < 5) throw std::invalid_argument("Grid: need a < b and n >= 5");
  h_ = (b - a) / (n - 1);
}

Grid Grid::cover(const IntervalUnion& domain, double target_h, double margin_factor) {
  if (!(target_h > 0.0)) throw std::invalid_argument("Grid::cover: target_h must be positive");
  const double D = domain.diameter();
  const double a = domain.left() - margin_factor * D;
  const double b = domain.right() + margin_factor * D;
  int n = static_cast<int>(std::ceil((b - a) / target_h)) + 1;
  if (n % 2 == 0) ++n;
  return Grid(a, b, n);
}

int Grid::nearest(double x) const {
  const int i = static_cast<int>(std::lround((x - a_) / h_));
  return std::clamp(i, 0, n_ - 1);
}

double TailModel::eval(double x) const {
  const double r = std::abs(x - xc);
  double v = c0;
  if (clog != 0.0) v += clog * std::log(r);
  if (calg != 0.0) v += calg * std::pow(r, -p);
  return v;
}

ExteriorClosure ExteriorClosure::zero() { return ExteriorClosure{}; }

ExteriorClosure ExteriorClosure::constant(double c) {
  ExteriorClosure e;
  e.left_.c0 = e.right_.c0 = c;
  return e;
}

ExteriorClosure ExteriorClosure::tails(TailModel left, TailModel right) {
  ExteriorClosure e;
  e.left_ = left;
  e.right_ = right;
  return e;
}

ExteriorClosure ExteriorClosure::analytic(std::function<double(double)> fn) {
  ExteriorClosure e;
  e.fn_ = std::move(fn);
  return e;
}

double ExteriorClosure::eval(double x) const {
  if (fn_) return fn_(x);
  return x < split_ ? left_.eval(x) : right_.eval(x);
}

double ExteriorClosure::tail_integral(double x0, double Z, int side) const {
  if (fn_) {
    // int_Z^inf f(x0 + s z)/z^2 dz = (1/Z) int_0^1 f(x0 + s Z/t) dt, on geometric
    // panels towards t = 0 to absorb logarithmic growth of f.
    double total = 0.0;
    double lo = 1.0, hi = 1.0;
    for (int panel = 0; panel < 48; ++panel) {
      lo = hi * 0.5;
      const double width = hi - lo;
      double acc = 0.0;
      for (int q = 0; q < 16; ++q) {
        const double t = lo + width * gl16.x[q];
        acc += gl16.w[q] * fn_(x0 + side * (Z / t));
      }
      total += acc * width;
      hi = lo;
    }
    return total / Z;
  }
  const TailModel& tm = side > 0 ? right_ : left_;
  // u(x0 + s z) has argument offset w relative to the model center
  const double w = side > 0 ? (x0 - tm.xc) : (tm.xc - x0);
  double v = tm.c0 / Z;
  if (tm.clog != 0.0) v += tm.clog * tail_log(w, Z);
  if (tm.calg != 0.0) v += tm.calg * tail_alg(w, Z, tm.p);
  return v;
}

GridFunction::GridFunction(Grid grid, Eigen::VectorXd values, ExteriorClosure closure)
    : grid_(grid), values_(std::move(values)), closure_(std::move(closure)) {
  if (values_.size() != grid_.n())
    throw std::invalid_argument("GridFunction: value count does not match grid");
  closure_.set_split(0.5 * (grid_.a() + grid_.b()));
}

GridFunction GridFunction::sample(const Grid& grid, const std::function<double(double)>& fn) {
  Eigen::VectorXd v(grid.n());
  for (int i = 0; i < grid.n(); ++i) v[i] = fn(grid.node(i));
  return GridFunction(grid, std::move(v), ExteriorClosure::analytic(fn));
}

GridFunction GridFunction::zeros(const Grid& grid) {
  return GridFunction(grid, Eigen::VectorXd::Zero(grid.n()), ExteriorClosure::zero());
}

double GridFunction::operator()(double x) const {
  if (!grid_.in_window(x)) return closure_.eval(x);
  const double s = (x - grid_.a()) / grid_.h();
  int i0 = static_cast<int>(std::floor(s)) - 1;
  i0 = std::clamp(i0, 0, grid_.n() - 4);
  const double t = s - i0;  // in [1,2] for interior stencils
  // 4-point Lagrange on nodes i0..i0+3
  const double t0 = t, t1 = t - 1.0, t2 = t - 2.0, t3 = t - 3.0;
  const double l0 = -t1 * t2 * t3 / 6.0;
  const double l1 = t0 * t2 * t3 / 2.0;
  const double l2 = -t0 * t1 * t3 / 2.0;
  const double l3 = t0 * t1 * t2 / 6.0;
  return l0 * values_[i0] + l1 * values_[i0 + 1] + l2 * values_[i0 + 2] + l3 * values_[i0 + 3];
}

bool GridFunction::all_finite() const { return values_.allFinite(); }

KappaField KappaField::constant(double c) {
  KappaField k;
  k.kind_ = Kind::Constant;
  k.coeffs_ = {c};
  return k;
}

KappaField KappaField::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("KappaField: empty polynomial");
  KappaField k;
  k.kind_ = Kind::Polynomial;
  k.coeffs_ = std::move(coeffs);
  return k;
}

KappaField KappaField::tabulated(std::vector<double> xs, std::vector<double> vals) {
  if (xs.size() != vals.size() || xs.size() < 2)
    throw std::invalid_argument("KappaField: bad table");
  if (!std::is_sorted(xs.begin(), xs.end()))
    throw std::invalid_argument("KappaField: table abscissae must be sorted");
  KappaField k;
  k.kind_ = Kind::Tabulated;
  k.xs_ = std::move(xs);
  k.vals_ = std::move(vals);
  return k;
}

double KappaField::operator()(double x) const {
  switch (kind_) {
    case Kind::Constant:
      return coeffs_[0];
    case Kind::Polynomial: {
      double v = 0.0;
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * x + *it;
      return v;
    }
    case Kind::Tabulated: {
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      size_t j = std::clamp<size_t>(it - xs_.begin(), 1, xs_.size() - 1);
      const double t = (x - xs_[j - 1]) / (xs_[j] - xs_[j - 1]);
      return (1.0 - t) * vals_[j - 1] + t * vals_[j];
    }
  }
  return 0.0;
}

double KappaField::deriv(double x) const {
  switch (kind_) {
    case Kind::Constant:
      return 0.0;
    case Kind::Polynomial: {
      double v = 0.0;
      for (size_t i = coeffs_.size(); i-- > 1;) v = v * x + coeffs_[i] * static_cast<double>(i);
      return v;
    }
    case Kind::Tabulated: {
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      size_t j = std::clamp<size_t>(it - xs_.begin(), 1, xs_.size() - 1);
      return (vals_[j] - vals_[j - 1]) / (xs_[j] - xs_[j - 1]);
    }
  }
  return 0.0;
}

void KappaField::validate_positive(const IntervalUnion& domain, int samples_per_component) const {
  for (int k = 0; k < domain.components(); ++k) {
    const auto& [a, b] = domain.component(k);
    for (int i = 0; i < samples_per_component; ++i) {
      const double x = a + (b - a) * i / (samples_per_component - 1);
      if (!((*this)(x) > 0.0)) throw std::invalid_argument("kappa must have positive infimum on I");
    }
  }
}

std::string KappaField::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::Constant:
      os << "constant:" << coeffs_[0];
      break;
    case Kind::Polynomial: {
      os << "poly:";
      for (size_t i = 0; i < coeffs_.size(); ++i) os << (i ? "," : "") << coeffs_[i];
      break;
    }
    case Kind::Tabulated: {
      os << "table:";
      for (size_t i = 0; i < xs_.size(); ++i) os << (i ? "," : "") << xs_[i] << ":" << vals_[i];
      break;
    }
  }
  return os.str();
}

void ConfigPoint::validate(const IntervalUnion& domain) const {
  if (!admissible(domain)) throw std::invalid_argument("xi must lie in I_delta0");
}

bool ConfigPoint::admissible(const IntervalUnion& domain) const {
  if (xi.empty() || !(delta0 > 0.0)) return false;
  for (size_t k = 0; k < xi.size(); ++k) {
    if (domain.dist_to_complement(xi[k]) < delta0) return false;
    for (size_t l = 0; l < k; ++l)
      if (std::abs(xi[k] - xi[l]) < delta0) return false;
  }
  return true;
}

double star_norm(const GridFunction& f, const IntervalUnion& domain_eps, double sigma,
                 const std::vector<double>& eta, double eps) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("star_norm: sigma must be in (0,1)");
  const Grid& g = f.grid();
  double best = -1.0;
  for (int i = 0; i < g.n(); ++i) {
    const double y = g.node(i);
    if (!domain_eps.contains(y)) continue;
    double wsum = eps;
    for (double ej : eta) wsum += std::pow(1.0 + std::abs(y - ej), -1.0 - sigma);
    best = std::max(best, std::abs(f.value(i)) / wsum);
  }
  if (best < 0.0) throw std::runtime_error("domain unresolved at this eps/h");
  return best;
}

}  // namespace liou
