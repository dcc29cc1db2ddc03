#pragma once

#include <cstdint>
#include <vector>

#include "ccopt/shift_spec.hpp"

namespace ccopt {

// Monitored-process description: in-control target, measurement noise,
// shift rate, and what a true-alarm repair leaves behind.
struct ProcessSpec {
  double mu0 = 0.0;             // target value, in-control expectation
  double sigma = 1.0;           // measurement standard deviation, > 0
  double s = 0.1;               // expected shifts per unit time, > 0
  double repair_residual = 0.0; // fraction of the distance left after repair, in [0,1)

  void validate() const;
};

// Cost coefficients, all per event or per unit time, all nonnegative.
struct CostSpec {
  double c_s = 1.0;   // sampling cost
  double c_f = 0.0;   // false-alarm cost
  double c_rb = 0.0;  // base repair cost
  double c_rs = 0.0;  // repair cost per unit distance
  double c_os = 0.0;  // base out-of-control cost per unit time
  double c_ob = 0.0;  // squared-distance out-of-control cost per unit time

  void validate() const;
};

// The two free design parameters of the chart (sample size fixed at 1).
struct ChartParams {
  double h = 1.0;  // time between samplings, > 0
  double K = 1.0;  // one-sided critical value on the observation scale

  void validate() const;
};

using Matrix = std::vector<std::vector<double>>;

// Expected fraction of a sampling interval spent out of control when the
// interval starts at the given distance from target. A positive start makes
// the whole interval out of control; from zero it is
// 1 - (1 - exp(-s h)) / (s h), the time average of P(at least one shift).
double out_of_control_fraction(double level, double s, double h);

// P(observation > K) when the process mean sits at mu0 + level.
double alarm_probability(double level, const ChartParams& params,
                         const ProcessSpec& process);

// Per-unit-time cost attached to the state (level, alarm flag): sampling
// cost, alarm cost (false alarm at level 0, repair otherwise) and the
// expected out-of-control cost of an interval at that level.
double state_cost_per_unit_time(double level, bool alarm, const ChartParams& params,
                                const ProcessSpec& process,
                                const MixtureShiftSpec& shift,
                                const CostSpec& costs);

// One-interval level-transition kernel on the uniform grid
// {0, step, ..., v_max}: row i gives the probability of moving from level
// i*step into each target level, with the shift increment bucketed by CDF
// differences of the time-h process distribution ([0,step] for the first
// bucket, (m*step,(m+1)*step] beyond) and the top level absorbing the tail.
// Throws GridError when more than 1e-6 of the increment mass lies beyond
// v_max, ParameterError when v_max is not a multiple of step.
Matrix discretize(const MixtureShiftSpec& spec, double s, double h, double step,
                  double v_max);

// Grid index a continuous increment (or level) falls into under the same
// bucket convention discretize() uses, clamped to the top level.
std::size_t grid_bucket_index(double value, double step, std::size_t level_count);

// Sampling-time Markov chain over (level, alarm flag) states.
struct ChartModel {
  ChartParams params;
  double grid_step = 0.0;
  std::vector<double> grid_levels;    // level values, size L
  Matrix transition;                  // 2L x 2L, row-stochastic
  std::vector<double> stationary;     // size 2L, sums to 1
  std::vector<double> cost_vector;    // per-unit-time cost per state
  double stationary_residual = 0.0;   // max-norm |P - P T| at the returned P

  static std::size_t state_index(std::size_t level_index, bool alarm) {
    return 2 * level_index + (alarm ? 1 : 0);
  }
  std::size_t level_count() const { return grid_levels.size(); }
};

// Assembles the full chart chain: level kernel, alarm split, repair routing,
// stationary distribution and per-state costs. `kernel` may pass a
// precomputed discretize() result for the same (spec, s, h, step, v_max);
// otherwise it is built here.
ChartModel build_model(const ChartParams& params, const ProcessSpec& process,
                       const MixtureShiftSpec& shift, const CostSpec& costs,
                       double step, double v_max, const Matrix* kernel = nullptr);

// Left fixed vector of a row-stochastic matrix by power iteration, max-norm
// residual below tol. Throws ConvergenceError with the last residual if the
// iteration cap is hit.
std::vector<double> stationary_distribution(const Matrix& transition,
                                            double tol = 1e-12,
                                            std::int64_t max_iter = 100000,
                                            double* residual_out = nullptr);

// E(C) = cost vector dotted with the stationary distribution.
double expected_cost(const ChartModel& model);

}  // namespace ccopt
