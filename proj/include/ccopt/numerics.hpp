#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace ccopt {

// log of the binomial coefficient C(n, k), lgamma-based so large n stay finite.
double log_choose(double n, double k);

// Binomial PMF P(R = r) for R ~ Bin(n, p). Exact at p = 0 and p = 1,
// log-space otherwise.
double binomial_pmf(std::int64_t r, std::int64_t n, double p);

// Standard normal CDF.
double normal_cdf(double z);

// Poisson PMF; safe for large means (falls back to log-space).
double poisson_pmf(std::int64_t k, double mean);

// PMF values for k = 0..k_max in one pass.
std::vector<double> poisson_pmf_table(std::int64_t k_max, double mean);

// Upper tail mass P(K > k_max).
double poisson_upper_tail(std::int64_t k_max, double mean);

// Smallest k_max with P(K > k_max) < tail_tol, by direct summation.
std::int64_t poisson_truncation_bound(double mean, double tail_tol = 1e-12);

// Composite Gauss-Legendre quadrature of f over [a, b] with `panels`
// equal panels (fixed 8-point rule per panel).
double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int panels);

}  // namespace ccopt
