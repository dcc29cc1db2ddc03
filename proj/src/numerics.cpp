#include "ccopt/numerics.hpp"

#include <cmath>

#include "ccopt/errors.hpp"

namespace ccopt {

double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binomial_pmf(std::int64_t r, std::int64_t n, double p) {
  if (n < 0 || p < 0.0 || p > 1.0) throw ParameterError("binomial_pmf: need n >= 0 and p in [0,1]");
  if (r < 0 || r > n) return 0.0;
  if (p == 0.0) return r == 0 ? 1.0 : 0.0;
  if (p == 1.0) return r == n ? 1.0 : 0.0;
  const double nd = static_cast<double>(n);
  const double rd = static_cast<double>(r);
  return std::exp(log_choose(nd, rd) + rd * std::log(p) + (nd - rd) * std::log1p(-p));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double poisson_pmf(std::int64_t k, double mean) {
  if (k < 0 || mean < 0.0) return 0.0;
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-mean + static_cast<double>(k) * std::log(mean) -
                  std::lgamma(static_cast<double>(k) + 1.0));
}

std::vector<double> poisson_pmf_table(std::int64_t k_max, double mean) {
  if (k_max < 0) throw ParameterError("poisson_pmf_table: k_max must be >= 0");
  if (mean < 0.0) throw ParameterError("poisson_pmf_table: mean must be >= 0");
  std::vector<double> pmf(static_cast<std::size_t>(k_max) + 1, 0.0);
  if (mean == 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (mean < 700.0) {
    // recursion from exp(-mean) stays in range for moderate means
    double term = std::exp(-mean);
    pmf[0] = term;
    for (std::int64_t k = 1; k <= k_max; ++k) {
      term *= mean / static_cast<double>(k);
      pmf[static_cast<std::size_t>(k)] = term;
    }
  } else {
    for (std::int64_t k = 0; k <= k_max; ++k)
      pmf[static_cast<std::size_t>(k)] = poisson_pmf(k, mean);
  }
  return pmf;
}

double poisson_upper_tail(std::int64_t k_max, double mean) {
  const auto pmf = poisson_pmf_table(k_max, mean);
  double cum = 0.0;
  for (double p : pmf) cum += p;
  return cum >= 1.0 ? 0.0 : 1.0 - cum;
}

std::int64_t poisson_truncation_bound(double mean, double tail_tol) {
  if (mean < 0.0) throw ParameterError("poisson_truncation_bound: mean must be >= 0");
  if (tail_tol <= 0.0) throw ParameterError("poisson_truncation_bound: tail_tol must be > 0");
  if (mean == 0.0) return 0;
  constexpr std::int64_t kCap = 2000000;
  double term = std::exp(-mean);
  double cum = term;
  std::int64_t k = 0;
  while (1.0 - cum >= tail_tol) {
    ++k;
    if (k > kCap)
      throw TruncationError("poisson_truncation_bound: no bound below cap for mean " +
                            std::to_string(mean));
    term *= mean / static_cast<double>(k);
    cum += term;
  }
  return k;
}

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlNodes[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeights[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int panels) {
  if (panels < 1) throw ParameterError("gauss_legendre: need at least one panel");
  if (b <= a) return 0.0;
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double mid = lo + 0.5 * width;
    double panel = 0.0;
    for (int i = 0; i < 8; ++i)
      panel += kGlWeights[i] * f(mid + 0.5 * width * kGlNodes[i]);
    total += 0.5 * width * panel;
  }
  return total;
}

}  // namespace ccopt
