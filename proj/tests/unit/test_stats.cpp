#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "levyext/stats.hpp"

namespace levyext {
namespace {

TEST(Wilson, KnownInterval) {
  const auto iv = wilson_interval(5, 100, 1.959963984540054);
  EXPECT_NEAR(iv.lower, 0.02154, 5e-5);
  EXPECT_NEAR(iv.upper, 0.11175, 5e-5);
  EXPECT_DOUBLE_EQ(iv.estimate, 0.05);
  const auto zero = wilson_interval(0, 1000, 2.0);
  EXPECT_DOUBLE_EQ(zero.lower, 0.0);
  EXPECT_GT(zero.upper, 0.0);
}

TEST(Wilson, ShrinksWithTrials) {
  double prev = INFINITY;
  for (std::uint64_t n : {100u, 1000u, 10000u, 100000u}) {
    const auto iv = wilson_interval(n / 20, n, 1.96);
    EXPECT_LT(iv.half_width(), prev);
    EXPECT_TRUE(iv.contains(0.05));
    prev = iv.half_width();
  }
}

TEST(Wilson, CoverageNearNominal) {
  std::mt19937_64 gen(1);
  const double p = 0.003;
  const int n = 2000, runs = 4000;
  std::binomial_distribution<std::uint64_t> b(n, p);
  int covered = 0;
  for (int i = 0; i < runs; ++i) covered += wilson_interval(b(gen), n, 1.96).contains(p);
  EXPECT_NEAR(covered / static_cast<double>(runs), 0.95, 0.025);
}

TEST(NormalQuantile, TwoSided) {
  EXPECT_NEAR(normal_quantile_two_sided(0.95), 1.959963984540054, 1e-12);
  EXPECT_NEAR(normal_quantile_two_sided(0.99), 2.5758293035489004, 1e-12);
}

TEST(Ks, SmallExamples) {
  EXPECT_DOUBLE_EQ(ks_distance({0.5}, [](double x) { return x; }), 0.5);
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(20000);
  for (auto& x : s) x = u(gen);
  EXPECT_LT(ks_distance(s, [](double x) { return std::clamp(x, 0.0, 1.0); }), 0.015);
  EXPECT_GT(ks_distance(s, [](double x) { return std::clamp(x * x, 0.0, 1.0); }), 0.2);
}

TEST(Ecdf, Counts) {
  const std::vector<double> s = {1.0, 2.0, 2.0, 3.0};
  EXPECT_DOUBLE_EQ(ecdf(s, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(ecdf(s, 2.0), 0.75);
  EXPECT_DOUBLE_EQ(ecdf(s, 9.0), 1.0);
}

TEST(PoissonChiSquare, AcceptsTrueMeanRejectsWrongMean) {
  std::mt19937_64 gen(3);
  std::poisson_distribution<std::uint64_t> pois(10.0);
  std::vector<std::uint64_t> counts(10000);
  for (auto& c : counts) c = pois(gen);
  const auto good = poisson_chi_square(counts, 10.0);
  EXPECT_GT(good.p_value, 0.01);
  EXPECT_GE(good.bins, 10);
  EXPECT_LT(poisson_chi_square(counts, 10.5).p_value, 1e-6);
}

TEST(LinearFit, RecoversLine) {
  const std::vector<double> x = {0, 1, 2, 3}, y = {1, 3, 5, 7}, s = {1, 1, 1, 1};
  const auto f = weighted_linear_fit(x, y, s);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.slope_se, std::sqrt(1.0 / 5.0), 1e-12);
}

TEST(Moments, MeanAndSd) {
  const std::vector<double> v = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(mean(v), 2.5);
  EXPECT_NEAR(standard_deviation(v), std::sqrt(5.0 / 3.0), 1e-15);
}

}  // namespace
}  // namespace levyext
