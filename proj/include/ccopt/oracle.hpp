#pragma once

#include <cstdint>
#include <vector>

#include "ccopt/chart.hpp"
#include "ccopt/rng.hpp"
#include "ccopt/shift_spec.hpp"

namespace ccopt {

// One realized shift path over a sampling interval: a nondecreasing step
// function H(t) = start_level + sum of jump_sizes with jump_times <= t.
struct Trajectory {
  double start_level = 0.0;
  double horizon = 0.0;
  std::vector<double> jump_times;  // strictly increasing, in (0, horizon)
  std::vector<double> jump_sizes;  // same length, all positive
};

// Monte Carlo estimate with its standard error; reproducible given the seed.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_paths = 0;
  std::uint64_t seed = 0;
};

// One shift size: with probability zeta a scaled geometric jump
// J * Geom(xi), otherwise an exponential of mean delta.
double sample_shift(const MixtureShiftSpec& spec, RngStream& rng);

// Homogeneous Poisson(s) jump times on (0, h) by exponential inter-arrival
// accumulation, jump sizes i.i.d. from sample_shift.
Trajectory simulate_trajectory(double start_level, double h, double s,
                               const MixtureShiftSpec& spec, RngStream& rng);

// Exact pathwise integral of H(t)^2 over the horizon: the path is constant
// between jumps, so each piece contributes level^2 * duration.
double pathwise_square_integral(const Trajectory& traj);

// Monte Carlo estimate of the interval squared-deviation integral starting
// at distance j. One substream per path, so any execution order gives
// bit-identical results; `threads` only spreads the work.
McEstimate estimate_c2(double j, double h, double s, const MixtureShiftSpec& spec,
                       std::int64_t n_paths, std::uint64_t seed, int threads = 1);

// Simulates chart operation over n_intervals sampling cycles: shift
// accumulation per simulate_trajectory, observation H(h) + Gaussian noise,
// one-sided alarm at K, proportional repair on true alarms. Each interval is
// charged the chart module's per-state cost mapping at the realized
// (pre-repair) level and alarm flag. Consecutive intervals are dependent, so
// the estimate treats equal-length blocks of intervals as the independent
// "paths" for the standard error; a short warm-up run is discarded first.
McEstimate simulate_chart(const ChartParams& params, const ProcessSpec& process,
                          const MixtureShiftSpec& spec, const CostSpec& costs,
                          std::int64_t n_intervals, std::uint64_t seed);

// Long-run occupancy frequencies of the (grid level, alarm flag) states seen
// by the same simulation, binned consistently with discretize(); used to
// cross-check the stationary distribution.
std::vector<double> simulate_chart_occupancy(const ChartParams& params,
                                             const ProcessSpec& process,
                                             const MixtureShiftSpec& spec,
                                             double step, double v_max,
                                             std::int64_t n_intervals,
                                             std::uint64_t seed);

}  // namespace ccopt
