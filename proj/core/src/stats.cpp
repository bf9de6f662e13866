#include "levyext/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "levyext/errors.hpp"

namespace levyext {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw DomainError("wilson_interval requires trials > 0");
  if (successes > trials) throw DomainError("wilson_interval: successes exceed trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double se = std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {p, std::max(0.0, center - z * se), std::min(1.0, center + z * se), se};
}

double normal_quantile_two_sided(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw DomainError("confidence must lie in (0,1)");
  return boost::math::quantile(boost::math::normal(), 0.5 + confidence / 2.0);
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_distance requires a non-empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ecdf(std::span<const double> sorted_sample, double x) {
  if (sorted_sample.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_sample.begin(), sorted_sample.end(), x);
  return static_cast<double>(it - sorted_sample.begin()) / sorted_sample.size();
}

ChiSquareResult poisson_chi_square(std::span<const std::uint64_t> counts, double mean,
                                   double min_expected) {
  if (counts.empty()) throw DomainError("poisson_chi_square requires observations");
  if (!(mean > 0.0)) throw DomainError("poisson_chi_square requires a positive mean");
  const double n = static_cast<double>(counts.size());
  const boost::math::poisson_distribution<double> law(mean);

  // Cells [lo, hi]; the first and last are open-ended tails.
  std::uint64_t lo = static_cast<std::uint64_t>(std::floor(mean));
  std::uint64_t hi = lo;
  while (lo > 0 && n * boost::math::cdf(law, static_cast<double>(lo - 1)) >= min_expected) --lo;
  while (n * boost::math::cdf(boost::math::complement(law, static_cast<double>(hi))) >=
         min_expected) {
    ++hi;
  }
  std::vector<double> expected;
  std::vector<double> observed;
  for (std::uint64_t k = lo; k <= hi; ++k) {
    double e;
    if (k == lo && k == hi) {
      e = 1.0;
    } else if (k == lo) {
      e = boost::math::cdf(law, static_cast<double>(k));
    } else if (k == hi) {
      e = boost::math::cdf(boost::math::complement(law, static_cast<double>(k - 1)));
    } else {
      e = boost::math::pdf(law, static_cast<double>(k));
    }
    expected.push_back(n * e);
    observed.push_back(0.0);
  }
  for (auto c : counts) {
    const std::uint64_t k = std::clamp(c, lo, hi);
    observed[k - lo] += 1.0;
  }

  ChiSquareResult out;
  out.bins = static_cast<int>(expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double diff = observed[i] - expected[i];
    out.statistic += diff * diff / expected[i];
  }
  out.degrees_of_freedom = out.bins - 1;
  if (out.degrees_of_freedom > 0) {
    out.p_value = boost::math::cdf(boost::math::complement(
        boost::math::chi_squared(out.degrees_of_freedom), out.statistic));
  }
  return out;
}

LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> sigma) {
  if (x.size() != y.size() || x.size() != sigma.size() || x.size() < 2) {
    throw DomainError("weighted_linear_fit requires matching inputs with at least two points");
  }
  double s = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(sigma[i] > 0.0)) throw DomainError("weighted_linear_fit requires positive sigmas");
    const double w = 1.0 / (sigma[i] * sigma[i]);
    s += w;
    sx += w * x[i];
    sy += w * y[i];
    sxx += w * x[i] * x[i];
    sxy += w * x[i] * y[i];
  }
  const double delta = s * sxx - sx * sx;
  if (!(delta > 0.0)) throw DomainError("weighted_linear_fit: degenerate abscissae");
  LinearFit fit;
  fit.slope = (s * sxy - sx * sy) / delta;
  fit.intercept = (sxx * sy - sx * sxy) / delta;
  fit.slope_se = std::sqrt(s / delta);
  return fit;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double standard_deviation(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace levyext
