#include "levyext/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "levyext/errors.hpp"

namespace levyext {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Decreasing function inverted by bisection on [lo, hi].
double solve_decreasing(const std::function<double(double)>& fn, double target, double lo,
                        double hi) {
  for (int i = 0; i < 200 && (hi - lo) > 1e-13 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (fn(mid) <= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

Kernel::Kernel(KernelFamily family, int dim, std::optional<double> truncation)
    : family_(family), dim_(dim), truncation_(truncation) {
  if (dim_ < 1 || dim_ > kMaxDim) throw UnsupportedError("kernel dimension out of range");
  if (truncation_ && !(*truncation_ > 0.0)) throw DomainError("kernel truncation must be positive");
  std::visit(Overloaded{
                 [](const GaussianKernel& g) {
                   if (!(g.sigma > 0.0)) throw DomainError("kernel.sigma must be positive");
                 },
                 [&](const PowerKernel& p) {
                   if (!(p.epsilon > 0.0)) throw DomainError("kernel.epsilon must be positive");
                   if (!(p.gamma > 0.0) || p.gamma > 1.0) {
                     throw DomainError("kernel.gamma must lie in (0, 1]");
                   }
                   power_exponent_ = (dim_ + p.epsilon) / p.gamma;
                 },
             },
             family_);
}

Kernel Kernel::gaussian(double sigma, int dim, std::optional<double> truncation) {
  return Kernel(GaussianKernel{sigma}, dim, truncation);
}

Kernel Kernel::power(double epsilon, double gamma, int dim, std::optional<double> truncation) {
  return Kernel(PowerKernel{epsilon, gamma}, dim, truncation);
}

std::string_view Kernel::family_name() const {
  return std::holds_alternative<GaussianKernel>(family_) ? "gaussian" : "power";
}

double Kernel::envelope(double r) const {
  if (const auto* g = std::get_if<GaussianKernel>(&family_)) return std::exp(-g->sigma * r * r);
  return std::pow(1.0 + r, -power_exponent_);
}

double Kernel::operator()(const Vec& u) const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += u[i] * u[i];
  return profile(std::sqrt(s));
}

double Kernel::length_scale() const {
  if (const auto* g = std::get_if<GaussianKernel>(&family_)) return 1.0 / std::sqrt(g->sigma);
  return 1.0;
}

double Kernel::envelope_radius(double level) const {
  if (level >= 1.0) return 0.0;
  if (const auto* g = std::get_if<GaussianKernel>(&family_)) {
    return std::sqrt(-std::log(level) / g->sigma);
  }
  return std::pow(level, -1.0 / power_exponent_) - 1.0;
}

std::optional<double> Kernel::holder_constant() const {
  if (truncation_) return std::nullopt;
  if (const auto* g = std::get_if<GaussianKernel>(&family_)) {
    // max_r 2 sigma r exp(-sigma r^2) at r = 1/sqrt(2 sigma).
    return std::sqrt(2.0 * g->sigma) * std::exp(-0.5);
  }
  return power_exponent_;
}

bool Kernel::integrable(double exponent) const {
  if (truncation_ || std::holds_alternative<GaussianKernel>(family_)) return exponent > 0.0;
  return exponent * power_exponent_ > dim_;
}

double eval(const Kernel& kernel, const Vec& u) { return kernel(u); }

double sup_over_set(const Kernel& kernel, const ConvexBody& body, const Vec& u) {
  return kernel.profile(body.distance(u));
}

double sup_over_set(const Kernel& kernel, const PConvexSet& set, const Vec& u) {
  return kernel.profile(set.distance(u));
}

double radial_moment(const Kernel& kernel, double exponent, int m, double R) {
  if (m < 1) throw DomainError("radial_moment requires m >= 1");
  R = std::max(R, 0.0);
  if (const auto* g = std::get_if<GaussianKernel>(&kernel.family())) {
    const double a = g->sigma * exponent;
    const double half = m / 2.0;
    return std::tgamma(half) / (2.0 * std::pow(a, half)) * boost::math::gamma_q(half, a * R * R);
  }
  const auto& p = std::get<PowerKernel>(kernel.family());
  const double q = exponent * (kernel.dim() + p.epsilon) / p.gamma;
  if (!(q > m)) throw DivergenceError("power kernel moment diverges: exponent too small");
  // s = 1 + r; (s - 1)^{m-1} expanded binomially.
  double total = 0.0;
  for (int j = 0; j <= m - 1; ++j) {
    const double sign = ((m - 1 - j) % 2 == 0) ? 1.0 : -1.0;
    total += sign * binomial(m - 1, j) * std::pow(1.0 + R, j + 1.0 - q) / (q - j - 1.0);
  }
  return std::max(total, 0.0);
}

double radial_tail_integral(const Kernel& kernel, double exponent, double R) {
  const int d = kernel.dim();
  R = std::max(R, 0.0);
  const double factor = d * unit_ball_volume(d);
  if (auto t = kernel.truncation()) {
    if (R >= *t) return 0.0;
    return factor * (radial_moment(kernel, exponent, d, R) - radial_moment(kernel, exponent, d, *t));
  }
  if (!kernel.integrable(exponent)) throw DivergenceError("kernel power is not integrable");
  return factor * radial_moment(kernel, exponent, d, R);
}

double tail_radius(const Kernel& kernel, double exponent, double budget) {
  if (!(budget > 0.0)) throw DomainError("tail_radius requires a positive budget");
  auto tail = [&](double R) { return radial_tail_integral(kernel, exponent, R); };
  if (tail(0.0) <= budget) return 0.0;
  double hi = kernel.length_scale();
  while (tail(hi) > budget) hi *= 2.0;
  return solve_decreasing(tail, budget, 0.0, hi);
}

double alpha_functional_steiner(const Kernel& kernel, const ConvexBody& body, double alpha) {
  const int d = body.dim();
  const auto v = intrinsic_volumes(body);
  auto moment = [&](int m) {
    if (auto t = kernel.truncation()) {
      return radial_moment(kernel, alpha, m, 0.0) - radial_moment(kernel, alpha, m, *t);
    }
    return radial_moment(kernel, alpha, m, 0.0);
  };
  double total = v[d];
  for (int j = 0; j < d; ++j) {
    if (v[j] == 0.0) continue;
    total += (d - j) * unit_ball_volume(d - j) * v[j] * moment(d - j);
  }
  return total;
}

// Sum over bodies of the exact single-body integral of profile^alpha(dist)
// over {dist > R}; bounds the same integral for the union.
double far_field_bound(const Kernel& kernel, const PConvexSet& set, double alpha, double R) {
  const int d = set.dim();
  double total = 0.0;
  const auto upper = kernel.truncation();
  if (upper && R >= *upper) return 0.0;
  for (const auto& body : set.bodies()) {
    const auto v = intrinsic_volumes(body);
    for (int j = 0; j < d; ++j) {
      if (v[j] == 0.0) continue;
      double m = radial_moment(kernel, alpha, d - j, R);
      if (upper) m -= radial_moment(kernel, alpha, d - j, *upper);
      total += (d - j) * unit_ball_volume(d - j) * v[j] * std::max(m, 0.0);
    }
  }
  return total;
}

namespace {

// Endpoints of {x : dist(u with u[axis] = x, body) <= t} on the last axis,
// where the truncated integrand jumps to zero.
void truncation_crossings(const ConvexBody& body, double t, const Vec& u, int axis,
                          std::vector<double>& out) {
  double s = 0.0;
  double lo = 0.0, hi = 0.0;
  if (const auto* b = std::get_if<Box>(&body.shape())) {
    for (int i = 0; i < axis; ++i) {
      const double e = std::max({b->corner[i] - u[i], u[i] - b->corner[i] - b->sides[i], 0.0});
      s += e * e;
    }
    lo = b->corner[axis];
    hi = b->corner[axis] + b->sides[axis];
  } else {
    const Vec& c = std::holds_alternative<Ball>(body.shape())
                       ? std::get<Ball>(body.shape()).center
                       : std::get<PointBody>(body.shape()).at;
    const double r = std::holds_alternative<Ball>(body.shape())
                         ? std::get<Ball>(body.shape()).radius
                         : 0.0;
    for (int i = 0; i < axis; ++i) s += (u[i] - c[i]) * (u[i] - c[i]);
    const double reach = r + t;
    if (s >= reach * reach) return;
    const double h = std::sqrt(reach * reach - s);
    out.push_back(c[axis] - h);
    out.push_back(c[axis] + h);
    return;
  }
  if (s >= t * t) return;
  const double h = std::sqrt(t * t - s);
  out.push_back(lo - h);
  out.push_back(hi + h);
}

struct NestedQuadrature {
  const std::function<double(const Vec&)>& integrand;
  int dim;
  Aabb box;
  std::vector<std::vector<double>> breaks;  // per-axis segment endpoints
  double rel_tol;
  std::vector<double> max_err;  // per-axis largest reported error density
  const PConvexSet* set = nullptr;
  std::optional<double> truncation;

  double integrate(int axis, Vec& u) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double total = 0.0;
    double err_total = 0.0;
    std::vector<double> bp = breaks[axis];
    if (truncation && axis + 1 == dim) {
      std::vector<double> extra;
      for (const auto& body : set->bodies()) truncation_crossings(body, *truncation, u, axis, extra);
      const double lo = bp.front(), hi = bp.back();
      for (double x : extra) {
        if (x > lo && x < hi) bp.push_back(x);
      }
      std::sort(bp.begin(), bp.end());
    }
    for (std::size_t s = 0; s + 1 < bp.size(); ++s) {
      const double a = bp[s];
      const double b = bp[s + 1];
      if (!(b > a)) continue;
      auto f = [&](double x) {
        u[axis] = x;
        if (axis + 1 == dim) return integrand(u);
        return integrate(axis + 1, u);
      };
      double err = 0.0;
      total += GK::integrate(f, a, b, 12, rel_tol, &err);
      err_total += err;
    }
    const double len = box.hi[axis] - box.lo[axis];
    if (len > 0.0) max_err[axis] = std::max(max_err[axis], err_total / len);
    return total;
  }
};

}  // namespace

namespace {

void check_functional_args(const Kernel& kernel, const PConvexSet& set, double alpha, double tol) {
  if (!(alpha > 0.0)) throw DomainError("alpha_functional requires alpha > 0");
  if (!(tol > 0.0)) throw DomainError("alpha_functional requires tol > 0");
  if (kernel.dim() != set.dim()) throw DomainError("kernel and set dimensions differ");
  if (!kernel.integrable(alpha)) {
    throw DivergenceError("alpha * (d + epsilon) / gamma <= d: sup-functional diverges");
  }
}

}  // namespace

FunctionalValue alpha_functional(const Kernel& kernel, const PConvexSet& set, double alpha,
                                 double tol) {
  check_functional_args(kernel, set, alpha, tol);
  if (set.bodies().size() == 1) {
    const double v = alpha_functional_steiner(kernel, set.bodies().front(), alpha);
    // Only the radial moments are computed, each to near machine precision.
    return {v, 1e-12 * v};
  }
  return alpha_functional_quadrature(kernel, set, alpha, tol);
}

FunctionalValue alpha_functional_quadrature(const Kernel& kernel, const PConvexSet& set,
                                            double alpha, double tol) {
  check_functional_args(kernel, set, alpha, tol);
  const int d = set.dim();

  auto far = [&](double R) { return far_field_bound(kernel, set, alpha, R); };
  double R = 0.0;
  if (const auto t = kernel.truncation()) {
    // The whole support fits in the near field.
    R = *t;
  } else if (far(0.0) > tol / 2.0) {
    double hi = kernel.length_scale();
    while (far(hi) > tol / 2.0) hi *= 2.0;
    R = solve_decreasing(far, tol / 2.0, 0.0, hi);
  }
  const double far_bound = far(R);

  Aabb box = set.bounds();
  for (int i = 0; i < d; ++i) {
    box.lo[i] -= R;
    box.hi[i] += R;
  }
  std::vector<std::vector<double>> breaks(d);
  for (int i = 0; i < d; ++i) {
    auto& bp = breaks[i];
    bp.push_back(box.lo[i]);
    bp.push_back(box.hi[i]);
    for (const auto& body : set.bodies()) {
      const Aabb bb = body.bounds();
      bp.push_back(bb.lo[i]);
      bp.push_back(bb.hi[i]);
      if (const auto* ball = std::get_if<Ball>(&body.shape())) bp.push_back(ball->center[i]);
      if (const auto t = kernel.truncation()) {
        if (bb.lo[i] - *t > box.lo[i]) bp.push_back(bb.lo[i] - *t);
        if (bb.hi[i] + *t < box.hi[i]) bp.push_back(bb.hi[i] + *t);
      }
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  }

  const std::function<double(const Vec&)> integrand = [&](const Vec& u) {
    const double p = kernel.profile(set.distance(u));
    return p > 0.0 ? std::pow(p, alpha) : 0.0;
  };
  NestedQuadrature quad{integrand, d,   box, breaks, 1e-9, std::vector<double>(d, 0.0),
                        &set,      kernel.truncation()};
  Vec u{};
  const double near = quad.integrate(0, u);

  // Inner error densities integrate over the remaining extents.
  double quad_err = 0.0;
  double extent = 1.0;
  for (int i = 0; i < d; ++i) extent *= (box.hi[i] - box.lo[i]);
  for (int i = 0; i < d; ++i) quad_err += quad.max_err[i] * extent;

  return {near + far_bound / 2.0, far_bound / 2.0 + quad_err};
}

}  // namespace levyext
