#include "levyext/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <queue>
#include <string>

#include "levyext/errors.hpp"

namespace levyext {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw UnsupportedError("dimension must be between 1 and " + std::to_string(kMaxDim));
  }
}

Vec to_vec(std::span<const double> xs) {
  if (xs.empty() || xs.size() > static_cast<std::size_t>(kMaxDim)) {
    throw UnsupportedError("coordinate list must have 1.." + std::to_string(kMaxDim) + " entries");
  }
  Vec v{};
  std::copy(xs.begin(), xs.end(), v.begin());
  return v;
}

Aabb box_bounds(const Box& b, int dim) {
  Aabb out;
  for (int i = 0; i < dim; ++i) {
    out.lo[i] = b.corner[i];
    out.hi[i] = b.corner[i] + b.sides[i];
  }
  return out;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double unit_ball_volume(int m) {
  if (m < 0) throw DomainError("unit_ball_volume requires m >= 0");
  return std::pow(std::numbers::pi, m / 2.0) / std::tgamma(m / 2.0 + 1.0);
}

double distance(const Vec& a, const Vec& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double distance_to_box(const Vec& u, const Aabb& box, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = std::max({box.lo[i] - u[i], 0.0, u[i] - box.hi[i]});
    s += d * d;
  }
  return std::sqrt(s);
}

double max_distance_to_box(const Vec& u, const Aabb& box, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = std::max(std::abs(u[i] - box.lo[i]), std::abs(u[i] - box.hi[i]));
    s += d * d;
  }
  return std::sqrt(s);
}

double box_box_distance(const Aabb& a, const Aabb& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = std::max({a.lo[i] - b.hi[i], 0.0, b.lo[i] - a.hi[i]});
    s += d * d;
  }
  return std::sqrt(s);
}

double box_box_max_distance(const Aabb& a, const Aabb& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = std::max(a.hi[i] - b.lo[i], b.hi[i] - a.lo[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// ConvexBody

ConvexBody::ConvexBody(int dim, Shape shape) : dim_(dim), shape_(std::move(shape)) {
  check_dim(dim_);
  std::visit(Overloaded{
                 [&](const Box& b) {
                   for (int i = 0; i < dim_; ++i) {
                     if (!(b.sides[i] > 0.0)) throw DomainError("box sides must be positive");
                   }
                 },
                 [](const Ball& b) {
                   if (!(b.radius > 0.0)) throw DomainError("ball radius must be positive");
                 },
                 [](const PointBody&) {},
             },
             shape_);
}

ConvexBody ConvexBody::box(std::span<const double> corner, std::span<const double> sides) {
  if (corner.size() != sides.size()) throw DomainError("box corner/sides dimension mismatch");
  return ConvexBody(static_cast<int>(corner.size()), Box{to_vec(corner), to_vec(sides)});
}

ConvexBody ConvexBody::cube(int dim, double side, const Vec& corner) {
  Vec sides{};
  for (int i = 0; i < dim; ++i) sides[i] = side;
  return ConvexBody(dim, Box{corner, sides});
}

ConvexBody ConvexBody::ball(std::span<const double> center, double radius) {
  return ConvexBody(static_cast<int>(center.size()), Ball{to_vec(center), radius});
}

ConvexBody ConvexBody::point(std::span<const double> at) {
  return ConvexBody(static_cast<int>(at.size()), PointBody{to_vec(at)});
}

double ConvexBody::volume() const {
  return std::visit(Overloaded{
                        [&](const Box& b) {
                          double v = 1.0;
                          for (int i = 0; i < dim_; ++i) v *= b.sides[i];
                          return v;
                        },
                        [&](const Ball& b) { return unit_ball_volume(dim_) * std::pow(b.radius, dim_); },
                        [](const PointBody&) { return 0.0; },
                    },
                    shape_);
}

Aabb ConvexBody::bounds() const {
  return std::visit(Overloaded{
                        [&](const Box& b) { return box_bounds(b, dim_); },
                        [&](const Ball& b) {
                          Aabb out;
                          for (int i = 0; i < dim_; ++i) {
                            out.lo[i] = b.center[i] - b.radius;
                            out.hi[i] = b.center[i] + b.radius;
                          }
                          return out;
                        },
                        [](const PointBody& p) { return Aabb{p.at, p.at}; },
                    },
                    shape_);
}

double ConvexBody::distance(const Vec& u) const {
  return std::visit(Overloaded{
                        [&](const Box& b) { return distance_to_box(u, box_bounds(b, dim_), dim_); },
                        [&](const Ball& b) {
                          return std::max(0.0, levyext::distance(u, b.center, dim_) - b.radius);
                        },
                        [&](const PointBody& p) { return levyext::distance(u, p.at, dim_); },
                    },
                    shape_);
}

double ConvexBody::max_distance(const Vec& u) const {
  return std::visit(Overloaded{
                        [&](const Box& b) { return max_distance_to_box(u, box_bounds(b, dim_), dim_); },
                        [&](const Ball& b) { return levyext::distance(u, b.center, dim_) + b.radius; },
                        [&](const PointBody& p) { return levyext::distance(u, p.at, dim_); },
                    },
                    shape_);
}

bool ConvexBody::contains(const Vec& u, double tol) const { return distance(u) <= tol; }

double ConvexBody::distance_to(const Aabb& box) const {
  return std::visit(Overloaded{
                        [&](const Box& b) { return box_box_distance(box_bounds(b, dim_), box, dim_); },
                        [&](const Ball& b) {
                          return std::max(0.0, distance_to_box(b.center, box, dim_) - b.radius);
                        },
                        [&](const PointBody& p) { return distance_to_box(p.at, box, dim_); },
                    },
                    shape_);
}

bool ConvexBody::contains_cube(const Vec& corner, double side) const {
  return std::visit(Overloaded{
                        [&](const Box& b) {
                          for (int i = 0; i < dim_; ++i) {
                            if (corner[i] < b.corner[i] || corner[i] + side > b.corner[i] + b.sides[i]) {
                              return false;
                            }
                          }
                          return true;
                        },
                        [&](const Ball& b) {
                          Aabb cube;
                          for (int i = 0; i < dim_; ++i) {
                            cube.lo[i] = corner[i];
                            cube.hi[i] = corner[i] + side;
                          }
                          return max_distance_to_box(b.center, cube, dim_) <= b.radius;
                        },
                        [](const PointBody&) { return false; },
                    },
                    shape_);
}

bool ConvexBody::cube_interior_meets(const Vec& corner, double side) const {
  return std::visit(Overloaded{
                        [&](const Box& b) {
                          for (int i = 0; i < dim_; ++i) {
                            if (!(corner[i] < b.corner[i] + b.sides[i] && b.corner[i] < corner[i] + side)) {
                              return false;
                            }
                          }
                          return true;
                        },
                        [&](const Ball& b) {
                          Aabb cube;
                          for (int i = 0; i < dim_; ++i) {
                            cube.lo[i] = corner[i];
                            cube.hi[i] = corner[i] + side;
                          }
                          return distance_to_box(b.center, cube, dim_) < b.radius;
                        },
                        [](const PointBody&) { return false; },
                    },
                    shape_);
}

bool ConvexBody::intersects(const ConvexBody& other) const {
  if (other.dim_ != dim_) return false;
  return std::visit(Overloaded{
                        [&](const Box& b) { return other.distance_to(box_bounds(b, dim_)) <= 0.0; },
                        [&](const Ball& b) { return other.distance(b.center) <= b.radius; },
                        [&](const PointBody& p) { return other.distance(p.at) <= 0.0; },
                    },
                    shape_);
}

ConvexBody ConvexBody::scaled(double factor) const {
  if (!(factor > 0.0)) throw DomainError("scale factor must be positive");
  Shape s = std::visit(Overloaded{
                           [&](const Box& b) -> Shape {
                             Box out = b;
                             for (int i = 0; i < dim_; ++i) {
                               out.corner[i] *= factor;
                               out.sides[i] *= factor;
                             }
                             return out;
                           },
                           [&](const Ball& b) -> Shape {
                             Ball out = b;
                             for (int i = 0; i < dim_; ++i) out.center[i] *= factor;
                             out.radius *= factor;
                             return out;
                           },
                           [&](const PointBody& p) -> Shape {
                             PointBody out = p;
                             for (int i = 0; i < dim_; ++i) out.at[i] *= factor;
                             return out;
                           },
                       },
                       shape_);
  return ConvexBody(dim_, std::move(s));
}

std::vector<double> intrinsic_volumes(const ConvexBody& body) {
  const int d = body.dim();
  std::vector<double> v(d + 1, 0.0);
  std::visit(Overloaded{
                 [&](const Box& b) {
                   // e_j via the product expansion prod (1 + a_i z).
                   v[0] = 1.0;
                   for (int i = 0; i < d; ++i) {
                     for (int j = i + 1; j >= 1; --j) v[j] += v[j - 1] * b.sides[i];
                   }
                 },
                 [&](const Ball& b) {
                   for (int j = 0; j <= d; ++j) {
                     v[j] = binomial(d, j) * unit_ball_volume(d) / unit_ball_volume(d - j) *
                            std::pow(b.radius, j);
                   }
                 },
                 [&](const PointBody&) { v[0] = 1.0; },
             },
             body.shape());
  return v;
}

double steiner_volume(const ConvexBody& body, double r) {
  if (!(r >= 0.0)) throw DomainError("steiner_volume requires r >= 0");
  const int d = body.dim();
  const auto v = intrinsic_volumes(body);
  double total = 0.0;
  for (int j = 0; j <= d; ++j) total += unit_ball_volume(d - j) * v[j] * std::pow(r, d - j);
  return total;
}

TubeBounds boundary_tube_bounds(const ConvexBody& body, double r) {
  if (!(r > 0.0)) throw DomainError("boundary_tube_bounds requires r > 0");
  const int d = body.dim();
  const auto v = intrinsic_volumes(body);
  double lower = 0.0;
  for (int j = 0; j < d; ++j) lower += unit_ball_volume(d - j) * v[j] * std::pow(r, d - j);
  return {lower, 2.0 * lower};
}

// ---------------------------------------------------------------------------
// PConvexSet

bool bodies_connected(const std::vector<ConvexBody>& bodies) {
  if (bodies.empty()) return false;
  std::vector<bool> seen(bodies.size(), false);
  std::queue<std::size_t> todo;
  todo.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!todo.empty()) {
    const std::size_t i = todo.front();
    todo.pop();
    for (std::size_t j = 0; j < bodies.size(); ++j) {
      if (!seen[j] && bodies[i].intersects(bodies[j])) {
        seen[j] = true;
        ++reached;
        todo.push(j);
      }
    }
  }
  return reached == bodies.size();
}

PConvexSet::PConvexSet(int dim, std::vector<ConvexBody> bodies)
    : dim_(dim), bodies_(std::move(bodies)) {
  check_dim(dim_);
  if (bodies_.empty()) throw DomainError("index set needs at least one body");
  for (const auto& b : bodies_) {
    if (b.dim() != dim_) throw DomainError("index set bodies must share the set's dimension");
  }
  if (!bodies_connected(bodies_)) throw DomainError("index set bodies are not connected");
  if (!contains(Vec{}, 1e-12)) throw DomainError("index set must contain the origin");
}

PConvexSet::PConvexSet(ConvexBody body) : PConvexSet(body.dim(), {std::move(body)}) {}

bool PConvexSet::all_degenerate() const {
  return std::all_of(bodies_.begin(), bodies_.end(), [](const auto& b) { return b.degenerate(); });
}

double PConvexSet::volume() const {
  std::vector<Aabb> boxes;
  double other = 0.0;
  for (std::size_t i = 0; i < bodies_.size(); ++i) {
    const auto& b = bodies_[i];
    if (const auto* box = std::get_if<Box>(&b.shape())) {
      boxes.push_back(box_bounds(*box, dim_));
      continue;
    }
    if (b.degenerate()) continue;
    const auto& ball = std::get<Ball>(b.shape());
    for (std::size_t j = 0; j < bodies_.size(); ++j) {
      if (j == i || bodies_[j].degenerate()) continue;
      if (bodies_[j].distance(ball.center) < ball.radius) {
        throw UnsupportedError("volume of unions with overlapping balls is not supported");
      }
    }
    other += b.volume();
  }
  // Inclusion-exclusion over box subsets; intersections of boxes are boxes.
  const std::size_t n = boxes.size();
  if (n > 20) throw UnsupportedError("too many boxes for inclusion-exclusion");
  double box_volume = 0.0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    Aabb inter;
    for (int i = 0; i < dim_; ++i) {
      inter.lo[i] = -1e300;
      inter.hi[i] = 1e300;
    }
    int bits = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      ++bits;
      for (int i = 0; i < dim_; ++i) {
        inter.lo[i] = std::max(inter.lo[i], boxes[j].lo[i]);
        inter.hi[i] = std::min(inter.hi[i], boxes[j].hi[i]);
      }
    }
    double v = 1.0;
    for (int i = 0; i < dim_; ++i) v *= std::max(0.0, inter.hi[i] - inter.lo[i]);
    box_volume += (bits % 2 == 1 ? v : -v);
  }
  return box_volume + other;
}

Aabb PConvexSet::bounds() const {
  Aabb out = bodies_.front().bounds();
  for (const auto& b : bodies_) {
    const Aabb bb = b.bounds();
    for (int i = 0; i < dim_; ++i) {
      out.lo[i] = std::min(out.lo[i], bb.lo[i]);
      out.hi[i] = std::max(out.hi[i], bb.hi[i]);
    }
  }
  return out;
}

bool PConvexSet::contains(const Vec& u, double tol) const { return distance(u) <= tol; }

double PConvexSet::distance(const Vec& u) const {
  double d = bodies_.front().distance(u);
  for (const auto& b : bodies_) d = std::min(d, b.distance(u));
  return d;
}

double PConvexSet::distance_to(const Aabb& box) const {
  double d = bodies_.front().distance_to(box);
  for (const auto& b : bodies_) d = std::min(d, b.distance_to(box));
  return d;
}

std::vector<double> PConvexSet::summed_intrinsic_volumes() const {
  std::vector<double> sum(dim_ + 1, 0.0);
  for (const auto& b : bodies_) {
    const auto v = intrinsic_volumes(b);
    for (int j = 0; j <= dim_; ++j) sum[j] += v[j];
  }
  return sum;
}

PConvexSet PConvexSet::scaled(double factor) const {
  std::vector<ConvexBody> out;
  out.reserve(bodies_.size());
  for (const auto& b : bodies_) out.push_back(b.scaled(factor));
  return PConvexSet(dim_, std::move(out));
}

// ---------------------------------------------------------------------------
// Grid scheme

double GridScheme::bounding_constant() const {
  const double scale = std::pow(volume, 1.0 / dim);
  double c = 0.0;
  for (const auto& z : intersecting) {
    for (int i = 0; i < dim; ++i) {
      // Extreme grid points of J_z along axis i.
      const double lo = static_cast<double>(z[i] * t);
      const double hi = static_cast<double>(z[i] * t + t - L);
      c = std::max({c, std::abs(lo) / scale, std::abs(hi) / scale});
    }
  }
  return c;
}

void GridScheme::write_csv(std::ostream& out) const {
  for (int i = 0; i < dim; ++i) out << "z" << (i + 1) << ',';
  out << "class\n";
  std::vector<LatticeIndex> sorted_inner = inner;
  std::sort(sorted_inner.begin(), sorted_inner.end());
  for (const auto& z : intersecting) {
    for (int i = 0; i < dim; ++i) out << z[i] << ',';
    const bool is_inner = std::binary_search(sorted_inner.begin(), sorted_inner.end(), z);
    out << (is_inner ? "inner" : "boundary") << '\n';
  }
}

std::vector<Vec> GridScheme::grid_points(const std::vector<LatticeIndex>& cubes) const {
  const std::int64_t per_axis = t / L;
  std::int64_t per_cube = 1;
  for (int i = 0; i < dim; ++i) per_cube *= per_axis;
  std::vector<Vec> out;
  out.reserve(cubes.size() * static_cast<std::size_t>(per_cube));
  for (const auto& z : cubes) {
    for (std::int64_t flat = 0; flat < per_cube; ++flat) {
      Vec p{};
      std::int64_t rem = flat;
      for (int i = 0; i < dim; ++i) {
        p[i] = static_cast<double>(z[i] * t + (rem % per_axis) * L);
        rem /= per_axis;
      }
      out.push_back(p);
    }
  }
  return out;
}

GridScheme build_grid(const PConvexSet& set, std::int64_t k, std::int64_t L) {
  if (k < 1 || L < 1) throw DomainError("build_grid requires k >= 1 and L >= 1");
  for (const auto& b : set.bodies()) {
    if (b.degenerate()) throw UnsupportedError("grid construction needs bodies with interior");
  }
  const int d = set.dim();
  GridScheme g;
  g.dim = d;
  g.k = k;
  g.L = L;
  g.volume = set.volume();
  if (static_cast<double>(k) > g.volume) {
    throw DegenerateGridError("k exceeds |C_n|; cubes would have side below L");
  }
  // floor((|C|/k)^{1/d}) with an exact integer correction step.
  const double ratio = g.volume / static_cast<double>(k);
  auto m = static_cast<std::int64_t>(std::floor(std::pow(ratio, 1.0 / d)));
  auto power = [d](std::int64_t x) {
    double r = 1.0;
    for (int i = 0; i < d; ++i) r *= static_cast<double>(x);
    return r;
  };
  while (power(m + 1) <= ratio * (1.0 + 1e-12)) ++m;
  while (m > 0 && power(m) > ratio * (1.0 + 1e-12)) --m;
  if (m < 1) throw DegenerateGridError("cube side rounds to zero");
  g.t = L * m;

  const Aabb bb = set.bounds();
  LatticeIndex zlo{};
  LatticeIndex zhi{};
  const double t = static_cast<double>(g.t);
  for (int i = 0; i < d; ++i) {
    zlo[i] = static_cast<std::int64_t>(std::floor(bb.lo[i] / t));
    zhi[i] = static_cast<std::int64_t>(std::ceil(bb.hi[i] / t)) - 1;
    zhi[i] = std::max(zhi[i], zlo[i]);
  }
  LatticeIndex z = zlo;
  while (true) {
    Vec corner{};
    for (int i = 0; i < d; ++i) corner[i] = static_cast<double>(z[i]) * t;
    bool meets = false;
    bool inside = false;
    for (const auto& body : set.bodies()) {
      if (!meets && body.cube_interior_meets(corner, t)) meets = true;
      if (!inside && body.contains_cube(corner, t)) inside = true;
    }
    if (meets) g.intersecting.push_back(z);
    if (inside) g.inner.push_back(z);

    int axis = 0;
    while (axis < d) {
      if (++z[axis] <= zhi[axis]) break;
      z[axis] = zlo[axis];
      ++axis;
    }
    if (axis == d) break;
  }
  return g;
}

std::vector<CountLimitRow> count_limit_experiment(const PConvexSet& base,
                                                  std::span<const double> scalings,
                                                  std::span<const std::int64_t> k_list,
                                                  std::int64_t L) {
  std::vector<CountLimitRow> rows;
  const double base_volume = base.volume();
  const double ld = std::pow(static_cast<double>(L), base.dim());
  for (const std::int64_t k : k_list) {
    CountLimitRow row;
    row.k = k;
    for (const double r : scalings) {
      if (base_volume * std::pow(r, base.dim()) < static_cast<double>(k)) continue;
      const GridScheme g = build_grid(base.scaled(r), k, L);
      row.scalings.push_back(r);
      row.p_ratio.push_back(static_cast<double>(g.p()) * ld / static_cast<double>(k));
      row.q_ratio.push_back(static_cast<double>(g.q()) * ld / static_cast<double>(k));
    }
    if (!row.scalings.empty()) {
      const std::size_t from = row.scalings.size() / 2;
      row.liminf_p = *std::min_element(row.p_ratio.begin() + from, row.p_ratio.end());
      row.limsup_q = *std::max_element(row.q_ratio.begin() + from, row.q_ratio.end());
      row.final_p = row.p_ratio.back();
      row.final_q = row.q_ratio.back();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace levyext
