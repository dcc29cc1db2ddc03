#pragma once

#include <cstdint>
#include <vector>

#include "ccopt/shift_spec.hpp"

namespace ccopt {

// Poisson law of the number of shifts accumulated after `time` at `rate`
// shifts per unit time (mean rate * time).
struct ShiftCountLaw {
  double rate = 0.0;
  double time = 0.0;

  void validate() const;  // rate > 0, time >= 0
  double mean() const { return rate * time; }
  double pmf(std::int64_t k) const;
  // PMF values for k = 0..k_max; their sum is 1 up to the truncated tail.
  std::vector<double> pmf_table(std::int64_t k_max) const;
  // Smallest k_max whose neglected upper tail is below tail_tol.
  std::int64_t truncation_bound(double tail_tol = 1e-12) const;
};

// CDF of the geometric distribution with support {1, 2, ...}:
// F(x) = 1 - (1 - xi)^floor(x) for x >= 1, 0 below the support.
double geom_cdf(double x, double xi);

// PMF of the sum of r independent geometric(xi) variables (negative
// binomial on {r, r+1, ...}): C(x-1, x-r) xi^r (1-xi)^(x-r). Zero for x < r.
double negbin_pmf(std::int64_t x, std::int64_t r, double xi);

// CDF of the sum of n independent exponentials with mean delta (Erlang).
// n = 0 is the distribution degenerate at zero: 1{x >= 0}.
double erlang_cdf(double x, std::int64_t n, double delta);

// F(x) for Erlang orders 0..n_max at a fixed point, one pass.
std::vector<double> erlang_cdf_orders(double x, std::int64_t n_max, double delta);

// Single-shift CDF: zeta * F_geom(x / J) + (1 - zeta) * F_exp(x).
double mixture_cdf(double x, const MixtureShiftSpec& spec);

// CDF of the sum of n shifts of which exactly r are geometric (the rest
// exponential). r = 0 is pure Erlang; otherwise the geometric part lives on
// the lattice {rJ, (r+1)J, ...} and the exponential remainder is convolved
// across it.
double sum_cdf_given_n_r(double x, std::int64_t n, std::int64_t r,
                         const MixtureShiftSpec& spec);

// CDF of the sum of n i.i.d. mixture shifts: binomial mix over the number
// of geometric components. n = 0 is degenerate at zero.
double sum_cdf_given_n(double x, std::int64_t n, const MixtureShiftSpec& spec);

// Time-t CDF of the accumulated shift process: Poisson(s*t)-mixed n-fold
// sums, with an atom of mass exp(-s*t) at zero. The Poisson mixture is
// truncated at k_max; if the neglected tail exceeds tail_tol a
// TruncationError is thrown.
double process_cdf(double x, double t, double s, const MixtureShiftSpec& spec,
                   std::int64_t k_max, double tail_tol = 1e-12);

// Batch evaluator for process_cdf at fixed (spec, s, t): precomputes the
// Poisson weights once and shares the per-point lattice work across the
// k-sum, which matters when a discretization grid queries many x values.
class ProcessDistribution {
 public:
  ProcessDistribution(const MixtureShiftSpec& spec, double s, double t,
                      std::int64_t k_max, double tail_tol = 1e-12);

  double cdf(double x) const;
  std::int64_t k_max() const { return k_max_; }

 private:
  MixtureShiftSpec spec_;
  double s_ = 0.0;
  double t_ = 0.0;
  std::int64_t k_max_ = 0;
  std::vector<double> poisson_;  // P(K = k), k = 0..k_max
};

}  // namespace ccopt
