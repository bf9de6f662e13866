#include <gtest/gtest.h>

#include <cmath>

#include "levyext/errors.hpp"
#include "levyext/extremes.hpp"

namespace levyext {
namespace {

// P(X(0) > x) for d = 1, Gaussian kernel sigma = 1, Pareto(1) jumps at
// x = sqrt(pi) / p, p = 0.1 and 0.01, by Fourier inversion
// (tests/oracles/exact_tail.py).
constexpr double kExactTail01 = 0.1371981;
constexpr double kExactTail001 = 0.0105920;

ExperimentConfig point_config() {
  ExperimentConfig cfg;
  cfg.model = TailModel::pareto(1.0);
  cfg.kernel = Kernel::gaussian(1.0, 1);
  const std::vector<double> o{0.0};
  cfg.index_set = PConvexSet(ConvexBody::point(o));
  return cfg;
}

ExperimentConfig square_config() {
  ExperimentConfig cfg;
  cfg.model = TailModel::pareto(1.0);
  cfg.kernel = Kernel::gaussian(1.0, 2);
  const std::vector<double> c{-0.5, -0.5}, s{1, 1};
  cfg.index_set = PConvexSet(ConvexBody::box(c, s));
  cfg.x_grid = {0.5, 1.0, 2.0};
  return cfg;
}

TEST(Limits, FrechetAndExactLaw) {
  const auto m = TailModel::pareto(1.0);
  EXPECT_NEAR(frechet_cdf(m, 1.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(poisson_max_cdf(m, 100.0, 100.0, 0.5), std::exp(-2.0), 1e-15);
  // Below the support of the jumps every atom exceeds the level.
  EXPECT_NEAR(poisson_max_cdf(m, 100.0, 100.0, 0.001), std::exp(-100.0), 1e-50);
}

TEST(Limits, TailLevelsSolveTarget) {
  const auto m = TailModel::pareto(1.0);
  const auto x = tail_levels(m, std::sqrt(M_PI), {1e-2, 1e-3});
  ASSERT_EQ(x.size(), 2u);
  EXPECT_LT(x[0], x[1]);
  EXPECT_NEAR(tail_mass(m, x[0]) * std::sqrt(M_PI), 1e-2, 1e-14);
  EXPECT_NEAR(tail_mass(m, x[1]) * std::sqrt(M_PI), 1e-3, 1e-15);
}

TEST(TailRatio, MatchesExactFiniteLevelLaw) {
  auto cfg = point_config();
  cfg.replicates = 20000;
  cfg.seed = 5150;
  cfg.exceedance_targets = {1e-1, 1e-2};
  const auto r = tail_ratio_experiment(cfg);
  EXPECT_NEAR(r.target, std::sqrt(M_PI), 1e-8);
  ASSERT_EQ(r.levels.size(), 2u);
  const double exact[] = {kExactTail01, kExactTail001};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto iv = wilson_interval(r.levels[i].count, r.levels[i].trials, 3.0);
    EXPECT_TRUE(iv.contains(exact[i])) << r.levels[i].x << ": " << iv.lower << " " << iv.upper;
  }
  // The finite-level ratio sits above the limit, as the exact law predicts.
  EXPECT_GT(r.levels[0].lower, std::sqrt(M_PI));
  EXPECT_GT(r.metrics.at("one_big_jump_fraction"), 0.5);
}

TEST(TailRatio, BoundedPerturbationPairs) {
  auto cfg = point_config();
  cfg.replicates = 4000;
  cfg.seed = 9;
  cfg.exceedance_targets = {1e-1, 1e-2};
  cfg.side_fields.one = SideFieldSpec::Kind::SmoothedNoise;
  const auto r = tail_ratio_experiment(cfg, true);
  ASSERT_EQ(r.perturbed_levels.size(), r.levels.size());
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    const double diff = std::abs(r.perturbed_levels[i].probability.estimate -
                                 r.levels[i].probability.estimate);
    EXPECT_LE(diff, std::hypot(r.levels[i].probability.half_width(),
                               r.perturbed_levels[i].probability.half_width()));
  }
  EXPECT_NE(r.verdict("perturbed_coverage"), nullptr);
}

TEST(Oracle, ExactLawRegression) {
  auto cfg = square_config();
  cfg.mode = SupremumMode::PoissonMaxOracle;
  cfg.scalings = {10.0, 31.622776601683793};
  cfg.replicates = 2000;
  cfg.seed = 31;
  const auto r = frechet_experiment(cfg);
  ASSERT_EQ(r.kind, "poisson_max_oracle");
  ASSERT_NE(r.verdict("exact_law"), nullptr);
  EXPECT_TRUE(r.verdict("exact_law")->pass) << r.verdict("exact_law")->detail;
  for (const auto& rung : r.ladder) {
    ASSERT_TRUE(rung.ks_exact.has_value());
    // Pareto scale 1 and a x >= 1: the finite-n law is exactly Frechet.
    EXPECT_NEAR(*rung.ks_exact, rung.ks, 1e-12);
    EXPECT_LT(rung.ks, 0.05);
  }
}

TEST(Oracle, DistantCubesIndependent) {
  auto cfg = square_config();
  cfg.mode = SupremumMode::PoissonMaxOracle;
  cfg.replicates = 20000;
  cfg.anticluster.L = 1;
  cfg.anticluster.block = 4;
  cfg.anticluster.level = 1.5;
  const auto r = anticluster_diagnostic(cfg);
  ASSERT_NE(r.verdict("distant_independence"), nullptr);
  EXPECT_TRUE(r.verdict("distant_independence")->pass) << r.verdict("distant_independence")->detail;
  // Disjoint cubes share no atoms in the oracle: pairs factorize on average.
  EXPECT_NEAR(r.metrics.at("pair_ratio"), 1.0, 0.05);
}

TEST(Anticluster, AdjacentCubesShareAtoms) {
  auto cfg = square_config();
  cfg.kernel = Kernel::gaussian(0.1, 2);  // wide kernel
  cfg.replicates = 300;
  cfg.simulation.grid_step = 0.25;
  cfg.anticluster.L = 1;
  cfg.anticluster.block = 3;
  cfg.anticluster.level = 400.0;
  const auto r = anticluster_diagnostic(cfg);
  const auto& adjacent = r.table.at(0);
  EXPECT_EQ(adjacent.label, "adjacent");
  EXPECT_GT(adjacent.values.at("pair_frequency"), 2 * adjacent.values.at("product_of_singles"));
}

TEST(Ergodic, BlockAveragesSettle) {
  auto cfg = square_config();
  cfg.replicates = 200;
  cfg.side_fields.two = SideFieldSpec::Kind::SmoothedNoise;
  cfg.simulation.grid_step = 0.1;
  cfg.ergodic.blocks = {1, 2, 4};
  const auto r = ergodic_average_check(cfg);
  for (const auto& v : r.verdicts) EXPECT_TRUE(v.pass) << v.name << ": " << v.detail;
}

TEST(Frechet, KernelLadderImproves) {
  auto cfg = square_config();
  cfg.scalings = {5.0, 20.0};
  cfg.replicates = 1000;
  cfg.seed = 77;
  const auto r = frechet_experiment(cfg);
  ASSERT_EQ(r.ladder.size(), 2u);
  EXPECT_LT(r.ladder[1].ks, r.ladder[0].ks);
}

TEST(Config, Validation) {
  auto cfg = point_config();
  cfg.replicates = 10;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = point_config();
  cfg.x_grid = {1.0, 0.5};
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = point_config();
  cfg.model = TailModel::stable(1.5);
  cfg.simulation.light = true;
  EXPECT_THROW(cfg.validate(), UnsupportedError);
  cfg = point_config();
  cfg.model = TailModel::pareto(0.5);
  cfg.kernel = Kernel::power(0.5, 1.0, 1);
  EXPECT_THROW(cfg.validate(), DivergenceError);
  cfg = point_config();
  cfg.model = TailModel::pareto(1.0, 0.0);
  EXPECT_THROW(tail_ratio_experiment(cfg), DomainError);
}

}  // namespace
}  // namespace levyext
