#pragma once

// Shared helpers for the test binaries.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace test_support {

// Kolmogorov-Smirnov sup distance between the empirical CDF of `samples`
// and a reference CDF, valid for distributions with atoms: on each
// constancy interval of the empirical CDF the gap is extremal at the
// endpoints, so both the right value and the left limit of F are compared.
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = samples[i];
    if (i + 1 < samples.size() && samples[i + 1] == x) continue;  // last tie only
    const double below = static_cast<double>(
        std::lower_bound(samples.begin(), samples.end(), x) - samples.begin());
    const double at_or_below = static_cast<double>(i + 1);
    // steps past any atom-inclusion rounding slack in the CDF under test
    const double left = x - std::max(1e-9, 1e-9 * std::abs(x));
    sup = std::max(sup, std::abs(at_or_below / n - cdf(x)));
    sup = std::max(sup, std::abs(below / n - cdf(left)));
  }
  return sup;
}

// One-sided DKW band half-width at confidence 1 - alpha.
inline double dkw_epsilon(std::size_t n, double alpha) {
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

}  // namespace test_support
