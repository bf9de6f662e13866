#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace levyext {

struct Interval {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  /// Wilson standard error sqrt(p(1-p)/n + z^2/(4n^2)) / (1 + z^2/n) at z.
  double standard_error = 0.0;

  bool contains(double x) const { return lower <= x && x <= upper; }
  double half_width() const { return 0.5 * (upper - lower); }
};

/// Wilson score interval for `successes` out of `trials` at normal quantile z.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z);

/// Two-sided normal quantile for a confidence level, e.g. 0.95 -> 1.95996.
double normal_quantile_two_sided(double confidence);

/// sup_x |F_n(x) - F(x)| for a continuous F.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Fraction of sample values <= x.
double ecdf(std::span<const double> sorted_sample, double x);

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
  int bins = 0;
};

/// Pearson goodness of fit of counts to Poisson(mean); bins are merged from
/// both tails until every expected count is at least min_expected.
ChiSquareResult poisson_chi_square(std::span<const std::uint64_t> counts, double mean,
                                   double min_expected = 5.0);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

/// Weighted least squares y = a + b x with weights 1/sigma^2.
LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> sigma);

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator).
double standard_deviation(std::span<const double> xs);

}  // namespace levyext
