#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "levyext/errors.hpp"
#include "levyext/simulator.hpp"
#include "levyext/stats.hpp"
#include "properties.hpp"

namespace levyext {
namespace {

PConvexSet interval(double length) {
  const std::vector<double> o{0.0}, l{length};
  return PConvexSet(ConvexBody::box(o, l));
}

PConvexSet square(double side) {
  const std::vector<double> c{-side / 2, -side / 2}, s{side, side};
  return PConvexSet(ConvexBody::box(c, s));
}

JumpField random_field(int d, std::uint64_t seed, std::size_t n, double spread) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> loc(-spread, spread);
  std::exponential_distribution<double> mag(0.5);
  JumpField f{d, Kernel::gaussian(1.5, d), {}, 0.0, std::nullopt};
  for (std::size_t i = 0; i < n; ++i) {
    Atom a;
    for (int j = 0; j < d; ++j) a.location[j] = loc(gen);
    a.magnitude = 1.0 + mag(gen);
    if (i % 7 == 3) a.magnitude = -a.magnitude;
    f.atoms.push_back(a);
  }
  return f;
}

TEST(Heavy, PoissonAtomLaw) {
  const auto r = testing::atom_count_law(50.0, {1.0, 2.0, 5.0, 10.0}, 10000, 404);
  const double means[] = {50, 25, 10, 5};
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_DOUBLE_EQ(r.means[j], means[j]);
    EXPECT_GT(r.p_values[j], 0.01) << "level " << r.levels[j];
  }
  EXPECT_NEAR(r.mean_count, 50.0, 3 * r.mean_count_se);
}

TEST(Heavy, SeriesHasSameLawAndIsOrdered) {
  const auto r = testing::atom_count_law(50.0, {1.0, 2.0, 5.0, 10.0}, 5000, 505, true);
  for (double p : r.p_values) EXPECT_GT(p, 0.001);
  const SimulationWindow w{interval(50.0), 0.0, 0.1, 1, 0};
  Rng rng = w.rng(Stream::Heavy);
  const auto f = simulate_heavy_series(w, TailModel::pareto(1.0), Kernel::gaussian(1.0, 1), rng);
  for (std::size_t i = 1; i < f.atoms.size(); ++i) {
    EXPECT_LE(f.atoms[i].magnitude, f.atoms[i - 1].magnitude);
  }
}

TEST(Heavy, ZeroMassModelHasNoAtoms) {
  const SimulationWindow w{interval(10.0), 2.0, 0.1, 1, 0};
  const auto f = simulate_heavy(w, TailModel::pareto(1.0, 0.0), Kernel::gaussian(1.0, 1));
  EXPECT_TRUE(f.atoms.empty());
  const auto nodes = grid_nodes(w.target, GridSpec{0.5, {}});
  for (double v : evaluate_field(f, nodes)) EXPECT_EQ(v, 0.0);
}

TEST(Heavy, NegativePartAppended) {
  auto model = TailModel::pareto(1.0);
  model.negative_part = NegativePart{0.5, 2.0};
  const SimulationWindow w{interval(100.0), 0.0, 0.1, 3, 0};
  const auto f = simulate_heavy(w, model, Kernel::gaussian(1.0, 1));
  std::size_t negatives = 0;
  bool seen_negative = false;
  for (const auto& a : f.atoms) {
    if (a.magnitude < 0) {
      EXPECT_LT(a.magnitude, -1.0);
      ++negatives;
      seen_negative = true;
    } else {
      EXPECT_FALSE(seen_negative) << "positive atom after the negative block";
    }
  }
  EXPECT_GT(negatives, 20u);
  EXPECT_LT(negatives, 90u);
}

TEST(Light, StableAtomCountMean) {
  // |W| (tail(delta) - tail(1)) = 10 (2 / sqrt(1e-4) - 2) = 1980.
  const auto model = TailModel::stable(0.5);
  const double expected = 10.0 * (tail_mass(model, 1e-4) - tail_mass(model, 1.0));
  EXPECT_NEAR(expected, 1980.0, 1e-9);
  std::vector<double> counts;
  for (std::uint64_t rep = 0; rep < 400; ++rep) {
    const SimulationWindow w{interval(10.0), 0.0, 0.1, 8, rep};
    Rng rng = w.rng(Stream::Light);
    const auto f = simulate_series_light(w, model, Kernel::gaussian(1.0, 1), 1e-4, rng);
    for (const auto& a : f.atoms) {
      ASSERT_GT(a.magnitude, 1e-4);
      ASSERT_LE(a.magnitude, 1.0);
    }
    EXPECT_NEAR(f.truncation_bias_bound, 10.0 * small_jump_mean(model, 1e-4), 1e-12);
    counts.push_back(static_cast<double>(f.atoms.size()));
  }
  EXPECT_NEAR(mean(counts), expected, 3 * std::sqrt(expected / counts.size()));
}

TEST(Light, RejectsInfiniteVariation) {
  const SimulationWindow w{interval(10.0), 0.0, 0.1, 8, 0};
  Rng rng = w.rng(Stream::Light);
  EXPECT_THROW(simulate_series_light(w, TailModel::stable(1.5), Kernel::gaussian(1.0, 1), 0.1, rng),
               UnsupportedError);
}

TEST(Light, CutoffMeetsBudget) {
  const auto model = TailModel::stable(0.5);
  const double delta = light_cutoff(model, 10.0, 0.01);
  EXPECT_LE(10.0 * small_jump_mean(model, delta), 0.01 * (1 + 1e-9));
  EXPECT_GT(10.0 * small_jump_mean(model, std::min(1.0, delta * 1.01)), 0.01);
  EXPECT_DOUBLE_EQ(light_cutoff(TailModel::pareto(1.0), 10.0, 0.01), 1.0);
}

TEST(Evaluate, Superposition) {
  const auto a = random_field(2, 1, 300, 10.0);
  const auto b = random_field(2, 2, 300, 10.0);
  JumpField both = a;
  both.atoms.insert(both.atoms.end(), b.atoms.begin(), b.atoms.end());
  const auto nodes = grid_nodes(square(6.0), GridSpec{0.25, {}});
  const auto va = evaluate_field(a, nodes), vb = evaluate_field(b, nodes);
  const auto vab = evaluate_field(both, nodes);
  for (std::size_t i = 0; i < nodes.size(); ++i) EXPECT_NEAR(vab[i], va[i] + vb[i], 1e-12);
}

TEST(Evaluate, MatchesDirectSum) {
  const auto f = random_field(3, 3, 200, 5.0);
  const FieldEvaluator ev({&f});
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const Vec v{u(gen), u(gen), u(gen)};
    double direct = 0.0;
    for (const auto& a : f.atoms) {
      direct += a.magnitude * f.kernel(Vec{v[0] - a.location[0], v[1] - a.location[1],
                                           v[2] - a.location[2]});
    }
    EXPECT_NEAR(ev.value(v), direct, ev.error_bound() + 1e-12);
  }
}

TEST(Evaluate, UpperBoundDominatesBox) {
  const auto f = random_field(2, 4, 400, 8.0);
  const FieldEvaluator ev({&f});
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> u(-6.0, 6.0), w(0.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    Aabb box;
    box.lo = {u(gen), u(gen), 0.0};
    box.hi = {box.lo[0] + w(gen), box.lo[1] + w(gen), 0.0};
    const double bound = ev.upper_bound(box);
    for (int j = 0; j < 50; ++j) {
      const Vec p{std::uniform_real_distribution<double>(box.lo[0], box.hi[0])(gen),
                  std::uniform_real_distribution<double>(box.lo[1], box.hi[1])(gen), 0.0};
      ASSERT_LE(ev.value(p), bound);
    }
  }
}

TEST(Evaluate, ClipBoundsSideFieldOne) {
  SideFieldSpec spec;
  spec.one = SideFieldSpec::Kind::SmoothedNoise;
  spec.one_bound = 5.0;
  const SimulationWindow w{square(8.0), 3.0, 0.1, 12, 0};
  const auto side = simulate_side_fields(w, spec);
  EXPECT_FALSE(side.one.atoms.empty());
  EXPECT_TRUE(side.two.atoms.empty());
  const auto nodes = grid_nodes(w.target, GridSpec{0.2, {}});
  double largest = 0.0;
  for (double v : evaluate_field(side.one, nodes)) largest = std::max(largest, std::abs(v));
  EXPECT_LE(largest, 1.0);
  EXPECT_EQ(largest, 1.0);  // magnitudes up to 5 saturate somewhere
}

TEST(Evaluate, SideFieldTwoSupremumStable) {
  SideFieldSpec spec;
  spec.two = SideFieldSpec::Kind::SmoothedNoise;
  std::vector<double> first, second;
  for (std::uint64_t rep = 0; rep < 400; ++rep) {
    const SimulationWindow w{square(1.0), 4.0, 0.05, 77, rep};
    const auto side = simulate_side_fields(w, spec);
    const FieldEvaluator ev({&side.two});
    const double s = grid_supremum(ev, w.target, GridSpec{0.05, {}}).sup_estimate;
    ASSERT_TRUE(std::isfinite(s));
    (rep < 200 ? first : second).push_back(s);
  }
  const double se = std::hypot(standard_deviation(first), standard_deviation(second)) /
                    std::sqrt(200.0);
  EXPECT_NEAR(mean(first), mean(second), 4 * se);
}

TEST(Supremum, SingleAtomPeak) {
  for (int d = 1; d <= 3; ++d) {
    const auto k = Kernel::gaussian(1.0, d);
    JumpField f{d, k, {}, 0.0, std::nullopt};
    Atom a;
    for (int i = 0; i < d; ++i) a.location[i] = 0.123456 * (i + 1);
    a.magnitude = 1.0;
    f.atoms.push_back(a);
    const FieldEvaluator ev({&f});
    const double h = d == 3 ? 0.02 : 0.01;
    const std::vector<double> c(d, -0.5), s(d, 1.0);
    const auto r = grid_supremum(ev, PConvexSet(ConvexBody::box(c, s)), GridSpec{h, {}});
    const double slack = *k.holder_constant() * h * std::sqrt(d) / 2;
    EXPECT_LE(r.sup_estimate, 1.0);
    EXPECT_GE(r.sup_estimate, 1.0 - slack);
    ASSERT_TRUE(r.upper_bound.has_value());
    EXPECT_GE(*r.upper_bound, 1.0);
  }
}

TEST(Supremum, BranchAndBoundMatchesExhaustive) {
  const std::vector<double> o2{0, 0}, o3{0, 0, 0};
  const std::vector<double> c1{-3, -1}, s1{6, 2}, c2{-1, -3}, s2{2, 6};
  struct Case {
    int d;
    PConvexSet set;
    double h;
  };
  const std::vector<Case> cases = {
      {1, interval(20.0), 0.01},
      {2, square(7.0), 0.05},
      {2, PConvexSet(ConvexBody::ball(o2, 4.0)), 0.05},
      {2, PConvexSet(2, {ConvexBody::box(c1, s1), ConvexBody::box(c2, s2)}), 0.05},
      {3, PConvexSet(ConvexBody::ball(o3, 1.5)), 0.1},
  };
  for (const auto& c : cases) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      const auto f = random_field(c.d, 100 + seed, 60 * c.d, 8.0);
      const FieldEvaluator ev({&f});
      const GridSpec spec{c.h, {}};
      const auto fast = grid_supremum(ev, c.set, spec);
      const auto slow = grid_supremum_exhaustive(ev, c.set, spec);
      ASSERT_EQ(fast.sup_estimate, slow.sup_estimate) << "d=" << c.d << " seed=" << seed;
      ASSERT_EQ(fast.argmax, slow.argmax);
      EXPECT_LE(fast.nodes_evaluated, slow.nodes_evaluated);
    }
  }
}

TEST(Supremum, PointTargetsAreExact) {
  const auto f = random_field(1, 5, 50, 5.0);
  const FieldEvaluator ev({&f});
  const std::vector<double> o{0.0};
  const auto r = grid_supremum(ev, PConvexSet(ConvexBody::point(o)), GridSpec{0.1, {}});
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.nodes_evaluated, 1u);
  EXPECT_DOUBLE_EQ(r.sup_estimate, ev.value(Vec{}));
}

TEST(Window, MarginSufficiency) {
  const auto r = testing::window_margin_sufficiency();
  EXPECT_TRUE(r.pass) << r.detail;
}

TEST(Window, MarginShrinksWithLooserBudget) {
  const auto k = Kernel::gaussian(1.0, 2);
  const auto m = TailModel::pareto(1.0);
  const double tight = required_margin(k, square(5.0), m, 1e-8, 1e-4);
  const double loose = required_margin(k, square(5.0), m, 1e-4, 1e-4);
  EXPECT_GT(tight, loose);
  EXPECT_GT(loose, 0.0);
  EXPECT_LE(required_margin(Kernel::gaussian(1.0, 2, 1.5), square(5.0), m, 1e-8, 1e-4), 1.5);
}

TEST(Window, Determinism) {
  const auto r = testing::determinism();
  EXPECT_TRUE(r.pass) << r.detail;
}

TEST(Window, StreamsAreIndependent) {
  const SimulationWindow w{square(4.0), 1.0, 0.1, 5, 0};
  Rng a = w.rng(Stream::Heavy), b = w.rng(Stream::Light);
  EXPECT_NE(a.uniform(0.0, 1.0), b.uniform(0.0, 1.0));
  SimulationWindow bad = w;
  bad.margin = -1.0;
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(Output, CsvWriters) {
  const auto f = random_field(2, 6, 3, 2.0);
  std::ostringstream atoms;
  write_atoms_csv(atoms, f);
  const std::string text = atoms.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  const std::vector<Vec> pts = {Vec{0, 0, 0}, Vec{1, 0, 0}};
  const std::vector<double> vals = {0.5, 0.25};
  std::ostringstream field;
  write_field_csv(field, 2, pts, vals);
  EXPECT_EQ(field.str().substr(0, 9), "x1,x2,val");
}

}  // namespace
}  // namespace levyext
