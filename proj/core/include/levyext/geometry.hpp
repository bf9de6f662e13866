#pragma once

// Convex bodies, p-convex index sets, intrinsic volumes and the cube-grid
// approximation of growing index sets.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

namespace levyext {

inline constexpr int kMaxDim = 3;

/// Point in R^d, d <= kMaxDim; unused trailing coordinates are zero.
using Vec = std::array<double, kMaxDim>;

/// Volume of the unit ball in R^m (omega_0 = 1).
double unit_ball_volume(int m);

double distance(const Vec& a, const Vec& b, int dim);

/// Axis-aligned bounding box.
struct Aabb {
  Vec lo{};
  Vec hi{};
};

/// Distance from u to the closed box, and to its farthest point.
double distance_to_box(const Vec& u, const Aabb& box, int dim);
double max_distance_to_box(const Vec& u, const Aabb& box, int dim);
/// Smallest and largest distance between points of two boxes.
double box_box_distance(const Aabb& a, const Aabb& b, int dim);
double box_box_max_distance(const Aabb& a, const Aabb& b, int dim);

struct Box {
  Vec corner{};
  Vec sides{};
};

struct Ball {
  Vec center{};
  double radius = 0.0;
};

/// Degenerate body {at}; supported wherever a single evaluation point is
/// meaningful (kernel functionals, tail experiments) but not for grids.
struct PointBody {
  Vec at{};
};

using Shape = std::variant<Box, Ball, PointBody>;

class ConvexBody {
 public:
  ConvexBody(int dim, Shape shape);

  static ConvexBody box(std::span<const double> corner, std::span<const double> sides);
  static ConvexBody cube(int dim, double side, const Vec& corner = {});
  static ConvexBody ball(std::span<const double> center, double radius);
  static ConvexBody point(std::span<const double> at);

  int dim() const { return dim_; }
  const Shape& shape() const { return shape_; }
  bool degenerate() const { return std::holds_alternative<PointBody>(shape_); }

  double volume() const;
  Aabb bounds() const;
  bool contains(const Vec& u, double tol = 0.0) const;
  double distance(const Vec& u) const;
  double max_distance(const Vec& u) const;
  /// Lower bound on the distance between the body and a box.
  double distance_to(const Aabb& box) const;

  /// Closed cube [corner, corner + side]^d inside the body.
  bool contains_cube(const Vec& corner, double side) const;
  /// Open cube (corner, corner + side)^d meets the body's interior.
  bool cube_interior_meets(const Vec& corner, double side) const;

  bool intersects(const ConvexBody& other) const;
  ConvexBody scaled(double factor) const;

 private:
  int dim_;
  Shape shape_;
};

/// V_0 .. V_d. Box: elementary symmetric polynomials of the sides; ball:
/// binom(d,j) omega_d / omega_{d-j} r^j.
std::vector<double> intrinsic_volumes(const ConvexBody& body);

/// |body (+) B(r)| via the Steiner polynomial.
double steiner_volume(const ConvexBody& body, double r);

struct TubeBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Bounds on |boundary(body) (+) B(r)|.
TubeBounds boundary_tube_bounds(const ConvexBody& body, double r);

/// Connected finite union of convex bodies containing the origin.
class PConvexSet {
 public:
  PConvexSet(int dim, std::vector<ConvexBody> bodies);
  explicit PConvexSet(ConvexBody body);

  int dim() const { return dim_; }
  const std::vector<ConvexBody>& bodies() const { return bodies_; }
  bool all_degenerate() const;

  /// Lebesgue measure of the union. Exact for unions of boxes (inclusion -
  /// exclusion) and for unions whose non-box members have pairwise disjoint
  /// interiors; throws UnsupportedError otherwise.
  double volume() const;
  Aabb bounds() const;
  bool contains(const Vec& u, double tol = 0.0) const;
  double distance(const Vec& u) const;
  double distance_to(const Aabb& box) const;

  /// Sum over bodies of V_j.
  std::vector<double> summed_intrinsic_volumes() const;

  PConvexSet scaled(double factor) const;

 private:
  int dim_;
  std::vector<ConvexBody> bodies_;
};

bool bodies_connected(const std::vector<ConvexBody>& bodies);

using LatticeIndex = std::array<std::int64_t, kMaxDim>;

/// Cube-grid approximation of an index set: cubes I_z = z t + [0,t)^d with
/// t = L floor((|C|/k)^{1/d}); P holds inner cubes, Q the cubes whose interior
/// meets the set.
class GridScheme {
 public:
  int dim = 0;
  std::int64_t k = 0;
  std::int64_t L = 0;
  double volume = 0.0;
  std::int64_t t = 0;
  std::vector<LatticeIndex> inner;        // P
  std::vector<LatticeIndex> intersecting; // Q (contains P)

  std::size_t p() const { return inner.size(); }
  std::size_t q() const { return intersecting.size(); }

  /// Lower corners of the L-cubes C_L(v), v in (L Z)^d, filling the P (minus)
  /// or Q (plus) cubes.
  std::vector<Vec> d_minus() const { return grid_points(inner); }
  std::vector<Vec> d_plus() const { return grid_points(intersecting); }

  /// Smallest c with D_plus inside [-c |C|^{1/d}, c |C|^{1/d}]^d.
  double bounding_constant() const;

  /// CSV rows "z1,..,zd,class" with class inner|boundary.
  void write_csv(std::ostream& out) const;

 private:
  std::vector<Vec> grid_points(const std::vector<LatticeIndex>& cubes) const;
};

GridScheme build_grid(const PConvexSet& set, std::int64_t k, std::int64_t L);

struct CountLimitRow {
  std::int64_t k = 0;
  std::vector<double> scalings;
  std::vector<double> p_ratio;  // p L^d / k along the sequence
  std::vector<double> q_ratio;
  double liminf_p = 0.0;  // min over the second half of the sequence
  double limsup_q = 0.0;  // max over the second half of the sequence
  double final_p = 0.0;
  double final_q = 0.0;
};

/// p L^d / k and q L^d / k along C_n = r_n C for each k. Scalings for which
/// |C_n| < k are skipped.
std::vector<CountLimitRow> count_limit_experiment(const PConvexSet& base,
                                                  std::span<const double> scalings,
                                                  std::span<const std::int64_t> k_list,
                                                  std::int64_t L);

}  // namespace levyext
