#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "levyext/errors.hpp"
#include "levyext/geometry.hpp"
#include "properties.hpp"

namespace levyext {
namespace {

// Dilated box split into the box, slabs on the faces, quarter cylinders on the
// edges and ball sectors at the corners.
double dilated_box_volume(const std::vector<double>& a, double r) {
  switch (a.size()) {
    case 1:
      return a[0] + 2 * r;
    case 2:
      return a[0] * a[1] + 2 * (a[0] + a[1]) * r + M_PI * r * r;
    case 3:
      return a[0] * a[1] * a[2] + 2 * (a[0] * a[1] + a[0] * a[2] + a[1] * a[2]) * r +
             M_PI * (a[0] + a[1] + a[2]) * r * r + 4.0 / 3.0 * M_PI * r * r * r;
  }
  return NAN;
}

TEST(Steiner, RandomBoxesMatchDecomposition) {
  std::mt19937_64 gen(2718);
  std::uniform_real_distribution<double> side(0.01, 10.0), radius(0.0, 5.0);
  for (int d = 1; d <= 3; ++d) {
    for (int i = 0; i < 100; ++i) {
      std::vector<double> a(d), c(d, 0.0);
      for (auto& x : a) x = side(gen);
      const double r = radius(gen);
      const double direct = dilated_box_volume(a, r);
      EXPECT_NEAR(steiner_volume(ConvexBody::box(c, a), r), direct, 1e-9 * direct);
    }
  }
}

TEST(Steiner, SquareExamples) {
  const std::vector<double> c{0, 0}, a{2, 2};
  const auto v = intrinsic_volumes(ConvexBody::box(c, a));
  ASSERT_EQ(v.size(), 3u);
  EXPECT_DOUBLE_EQ(v[0], 1.0);
  EXPECT_DOUBLE_EQ(v[1], 4.0);
  EXPECT_DOUBLE_EQ(v[2], 4.0);
  const std::vector<double> s{3, 3};
  EXPECT_NEAR(steiner_volume(ConvexBody::box(c, s), 0.5), 9 + 4 * 3 * 0.5 + M_PI * 0.25, 1e-12);
  const std::vector<double> c1{0}, l{2.5};
  EXPECT_NEAR(steiner_volume(ConvexBody::box(c1, l), 0.7), 2.5 + 1.4, 1e-12);
}

TEST(Steiner, DiskIntrinsicVolumes) {
  const std::vector<double> o{0, 0};
  for (double r : {0.5, 1.0, 3.0}) {
    const auto v = intrinsic_volumes(ConvexBody::ball(o, r));
    EXPECT_NEAR(v[0], 1.0, 1e-15);
    EXPECT_NEAR(v[1], M_PI * r, 1e-12);
    EXPECT_NEAR(v[2], M_PI * r * r, 1e-12);
    // Dilated disk is a disk of radius r + s.
    EXPECT_NEAR(steiner_volume(ConvexBody::ball(o, r), 0.4), M_PI * (r + 0.4) * (r + 0.4), 1e-12);
  }
}

TEST(BoundaryTube, MonteCarloInsideBounds) {
  const std::vector<double> c{0, 0}, a{1, 1};
  const auto square = ConvexBody::box(c, a);
  const double r = 0.1;
  const auto b = boundary_tube_bounds(square, r);
  EXPECT_NEAR(b.lower, 4 * r + M_PI * r * r, 1e-15);
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-r, 1 + r);
  const int n = 1000000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    const double x = u(gen), y = u(gen);
    const double outside = square.distance(Vec{x, y, 0});
    const double inside = std::min({x, 1 - x, y, 1 - y});
    if (outside > 0.0 ? outside <= r : inside <= r) ++hits;
  }
  const double area = (1 + 2 * r) * (1 + 2 * r);
  const double estimate = area * hits / n;
  const double exact = 8 * r + M_PI * r * r - 4 * r * r;
  EXPECT_NEAR(estimate, exact, 5e-3);
  EXPECT_GE(estimate, b.lower);
  EXPECT_LE(estimate, b.upper);
}

TEST(PConvexSet, UnionVolumeAndValidation) {
  const std::vector<double> c1{-3, -1}, s1{6, 2}, c2{-1, -3}, s2{2, 6};
  const PConvexSet cross(2, {ConvexBody::box(c1, s1), ConvexBody::box(c2, s2)});
  EXPECT_NEAR(cross.volume(), 12 + 12 - 4, 1e-12);
  EXPECT_NEAR(cross.scaled(2.0).volume(), 80.0, 1e-12);
  const std::vector<double> far{10, 10}, unit{1, 1};
  EXPECT_THROW(PConvexSet(2, {ConvexBody::box(c1, s1), ConvexBody::box(far, unit)}), DomainError);
  EXPECT_THROW(PConvexSet(ConvexBody::box(far, unit)), DomainError);
}

TEST(Grid, SquareTilesExactly) {
  const std::vector<double> c{0, 0}, a{10, 10};
  const auto g = build_grid(PConvexSet(ConvexBody::box(c, a)), 4, 1);
  EXPECT_EQ(g.t, 5);
  EXPECT_EQ(g.p(), 4u);
  EXPECT_EQ(g.q(), 4u);
}

// Inner: every raster point of the closed cube is in the disk. Intersecting:
// some raster point strictly inside the cube is strictly inside the disk.
TEST(Grid, DiskMatchesRasterization) {
  const std::vector<double> o{0, 0};
  const PConvexSet disk(ConvexBody::ball(o, 10.0));
  const auto g = build_grid(disk, 25, 1);
  EXPECT_EQ(g.t, 3);  // floor(sqrt(100 pi / 25)) = floor(3.54)
  const double t = 3.0, h = 0.01;
  const int steps = static_cast<int>(std::lround(t / h));
  std::size_t p = 0, q = 0;
  for (int zx = -4; zx <= 3; ++zx) {
    for (int zy = -4; zy <= 3; ++zy) {
      bool all = true, any = false;
      for (int i = 0; i <= steps; ++i) {
        for (int j = 0; j <= steps; ++j) {
          const double x = zx * t + i * h, y = zy * t + j * h;
          const double r2 = x * x + y * y;
          all = all && r2 <= 100.0;
          if (i > 0 && i < steps && j > 0 && j < steps && r2 < 100.0) any = true;
        }
      }
      p += all;
      q += any;
    }
  }
  EXPECT_EQ(g.p(), p);
  EXPECT_EQ(g.q(), q);
  EXPECT_LT(g.p(), 25u);
  EXPECT_GT(g.q(), 25u);
}

TEST(Grid, SandwichContainment) {
  const auto r = testing::sandwich_containment();
  EXPECT_TRUE(r.pass) << r.detail;
}

TEST(Grid, LCubeCornersFillCubes) {
  const std::vector<double> o{0, 0};
  const auto g = build_grid(PConvexSet(ConvexBody::ball(o, 30.0)), 20, 2);
  EXPECT_EQ(g.t % 2, 0);
  const auto m = static_cast<std::size_t>((g.t / 2) * (g.t / 2));
  EXPECT_EQ(g.d_minus().size(), g.p() * m);
  EXPECT_EQ(g.d_plus().size(), g.q() * m);
  EXPECT_GT(g.bounding_constant(), 0.0);
}

TEST(Grid, RatioExactWhenSideDivides) {
  const std::vector<double> c{0, 0}, a{1, 1};
  const PConvexSet unit(ConvexBody::box(c, a));
  const double scalings[] = {50.0, 53.0, 60.0, 70.0};
  const std::int64_t ks[] = {100};
  const auto rows = count_limit_experiment(unit, scalings, ks, 1);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_DOUBLE_EQ(rows[0].p_ratio[0], 1.0);   // t = 5 divides 50
  EXPECT_DOUBLE_EQ(rows[0].p_ratio[1], 1.0);   // t = 5 leaves a strip of width 3
  EXPECT_NEAR(rows[0].q_ratio[1], 1.21, 1e-12);  // which the boundary cubes cover
  EXPECT_DOUBLE_EQ(rows[0].p_ratio[2], 1.0);   // t = 6 divides 60
  EXPECT_DOUBLE_EQ(rows[0].q_ratio[3], 1.0);   // t = 7 divides 70
}

TEST(Grid, Errors) {
  const std::vector<double> o{0, 0};
  const PConvexSet small(ConvexBody::ball(o, 1.0));
  EXPECT_THROW(build_grid(small, 10, 1), DegenerateGridError);
  EXPECT_THROW(build_grid(PConvexSet(ConvexBody::point(o)), 1, 1), UnsupportedError);
}

TEST(Grid, CsvClassifiesCubes) {
  const std::vector<double> o{0, 0};
  const auto g = build_grid(PConvexSet(ConvexBody::ball(o, 10.0)), 25, 1);
  std::ostringstream os;
  g.write_csv(os);
  const std::string s = os.str();
  std::size_t inner = 0, boundary = 0, pos = 0;
  while ((pos = s.find(",inner\n", pos)) != std::string::npos) ++inner, ++pos;
  pos = 0;
  while ((pos = s.find(",boundary\n", pos)) != std::string::npos) ++boundary, ++pos;
  EXPECT_EQ(inner, g.p());
  EXPECT_EQ(inner + boundary, g.q());
}

}  // namespace
}  // namespace levyext
