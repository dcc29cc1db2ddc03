#include "ccopt/chart.hpp"

#include <cmath>
#include <string>

#include "ccopt/distributions.hpp"
#include "ccopt/errors.hpp"
#include "ccopt/moments.hpp"
#include "ccopt/numerics.hpp"

namespace ccopt {

void ProcessSpec::validate() const {
  if (!(sigma > 0.0)) throw ParameterError("process spec: sigma must be > 0");
  // s == 0 is the degenerate no-shift limit; useful in tests and sanity runs
  if (!(s >= 0.0)) throw ParameterError("process spec: s must be >= 0");
  if (!(repair_residual >= 0.0 && repair_residual < 1.0))
    throw ParameterError("process spec: repair_residual must be in [0,1)");
  if (!std::isfinite(mu0)) throw ParameterError("process spec: mu0 must be finite");
}

void CostSpec::validate() const {
  const double all[] = {c_s, c_f, c_rb, c_rs, c_os, c_ob};
  for (double c : all)
    if (!(c >= 0.0) || !std::isfinite(c))
      throw ParameterError("cost spec: coefficients must be finite and >= 0");
}

void ChartParams::validate() const {
  if (!(h > 0.0)) throw ParameterError("chart params: h must be > 0");
  if (!std::isfinite(K)) throw ParameterError("chart params: K must be finite");
}

double out_of_control_fraction(double level, double s, double h) {
  if (level > 0.0) return 1.0;
  const double x = s * h;
  if (x <= 0.0) return 0.0;
  // time average of P(at least one shift by t); series for small x where
  // the direct form cancels
  if (x < 1e-6) return x / 2.0 - x * x / 6.0;
  return 1.0 - (-std::expm1(-x)) / x;
}

double alarm_probability(double level, const ChartParams& params,
                         const ProcessSpec& process) {
  return 1.0 - normal_cdf((params.K - process.mu0 - level) / process.sigma);
}

double state_cost_per_unit_time(double level, bool alarm, const ChartParams& params,
                                const ProcessSpec& process,
                                const MixtureShiftSpec& shift, const CostSpec& costs) {
  IntervalCostInput input;
  input.h = params.h;
  input.j = level;
  input.s = process.s;
  input.shift = shift;
  const double taguchi = c2_mixture(input).integral / params.h;
  const double ooc = costs.c_os * out_of_control_fraction(level, process.s, params.h) +
                     costs.c_ob * taguchi;
  double event_cost = costs.c_s;
  if (alarm) event_cost += level > 0.0 ? costs.c_rb + costs.c_rs * level : costs.c_f;
  return event_cost / params.h + ooc;
}

namespace {

std::size_t level_count_for(double step, double v_max) {
  if (!(step > 0.0)) throw ParameterError("discretize: step must be > 0");
  if (!(v_max > 0.0)) throw ParameterError("discretize: v_max must be > 0");
  const double ratio = v_max / step;
  const auto n = static_cast<std::int64_t>(std::llround(ratio));
  if (n < 1 || std::abs(static_cast<double>(n) * step - v_max) >
                   1e-6 * std::max(step, v_max))
    throw ParameterError("discretize: v_max must be a positive multiple of step");
  return static_cast<std::size_t>(n) + 1;
}

}  // namespace

Matrix discretize(const MixtureShiftSpec& spec, double s, double h, double step,
                  double v_max) {
  spec.validate();
  if (!(s >= 0.0)) throw ParameterError("discretize: s must be >= 0");
  if (!(h > 0.0)) throw ParameterError("discretize: h must be > 0");
  const std::size_t levels = level_count_for(step, v_max);

  // Each level m*step represents the increment bucket
  // ((m-1/2)*step, (m+1/2)*step] (nearest level, [0, step/2] for m = 0).
  // Rounding to the nearest level keeps the per-interval rounding unbiased
  // and keeps jump atoms sitting on grid multiples aligned across stacked
  // intervals; flooring to the bucket's lower edge drifts low by ~step/2 per
  // interval and misplaces stacked atoms by whole buckets.
  // Increment CDF at every half-grid point; entry m is Z((m+1/2)*step).
  // s == 0 means no shifts at all.
  std::vector<double> inc_cdf(levels, 1.0);
  double tail_at_vmax = 0.0;
  if (s > 0.0) {
    const std::int64_t k_max = poisson_truncation_bound(s * h, 1e-12);
    ProcessDistribution z(spec, s, h, k_max);
    for (std::size_t m = 0; m < levels; ++m)
      inc_cdf[m] = z.cdf((static_cast<double>(m) + 0.5) * step);
    tail_at_vmax = 1.0 - z.cdf(v_max);
  }
  if (tail_at_vmax > 1e-6)
    throw GridError("discretize: " + std::to_string(tail_at_vmax) +
                    " of the one-interval increment mass lies beyond v_max = " +
                    std::to_string(v_max) + "; enlarge the grid");

  Matrix kernel(levels, std::vector<double>(levels, 0.0));
  for (std::size_t i = 0; i < levels; ++i) {
    if (i + 1 == levels) {
      kernel[i][i] = 1.0;  // top level absorbs
      continue;
    }
    const std::size_t reach = levels - 1 - i;
    kernel[i][i] = inc_cdf[0];  // increment in [0, step/2]
    for (std::size_t m = 1; m < reach; ++m)
      kernel[i][i + m] = inc_cdf[m] - inc_cdf[m - 1];
    kernel[i][levels - 1] = 1.0 - inc_cdf[reach - 1];
  }
  return kernel;
}

std::size_t grid_bucket_index(double value, double step, std::size_t level_count) {
  std::size_t idx = 0;
  if (value > 0.5 * step * (1.0 + 1e-9))
    idx = static_cast<std::size_t>(std::ceil(value / step - 0.5 - 1e-9));
  return std::min(idx, level_count - 1);
}

std::vector<double> stationary_distribution(const Matrix& transition, double tol,
                                            std::int64_t max_iter, double* residual_out) {
  const std::size_t n = transition.size();
  if (n == 0) throw ParameterError("stationary_distribution: empty matrix");
  for (const auto& row : transition)
    if (row.size() != n)
      throw ParameterError("stationary_distribution: matrix must be square");

  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  std::vector<double> q(n, 0.0);
  double residual = 0.0;
  for (std::int64_t iter = 0; iter < max_iter; ++iter) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double pi = p[i];
      if (pi == 0.0) continue;
      const auto& row = transition[i];
      for (std::size_t k = 0; k < n; ++k) q[k] += pi * row[k];
    }
    double sum = 0.0;
    for (double v : q) sum += v;
    for (double& v : q) v /= sum;
    residual = 0.0;
    for (std::size_t k = 0; k < n; ++k) residual = std::max(residual, std::abs(q[k] - p[k]));
    p.swap(q);
    if (residual < tol) {
      if (residual_out != nullptr) *residual_out = residual;
      return p;
    }
  }
  throw ConvergenceError("stationary_distribution: residual " + std::to_string(residual) +
                             " after " + std::to_string(max_iter) + " iterations",
                         residual);
}

ChartModel build_model(const ChartParams& params, const ProcessSpec& process,
                       const MixtureShiftSpec& shift, const CostSpec& costs,
                       double step, double v_max, const Matrix* kernel) {
  params.validate();
  process.validate();
  shift.validate();
  costs.validate();

  Matrix own_kernel;
  if (kernel == nullptr) {
    own_kernel = discretize(shift, process.s, params.h, step, v_max);
    kernel = &own_kernel;
  }
  const std::size_t levels = kernel->size();

  ChartModel model;
  model.params = params;
  model.grid_step = step;
  model.grid_levels.resize(levels);
  for (std::size_t i = 0; i < levels; ++i)
    model.grid_levels[i] = static_cast<double>(i) * step;

  std::vector<double> alarm(levels);
  for (std::size_t i = 0; i < levels; ++i)
    alarm[i] = alarm_probability(model.grid_levels[i], params, process);

  const std::size_t n_states = 2 * levels;
  model.transition.assign(n_states, std::vector<double>(n_states, 0.0));
  for (std::size_t i = 0; i < levels; ++i) {
    for (int a = 0; a < 2; ++a) {
      // A true alarm repairs to ceil(alpha * level / step) * step before the
      // next interval; a false alarm stays at zero.
      std::size_t start = i;
      if (a == 1 && i > 0)
        start = static_cast<std::size_t>(std::ceil(
            process.repair_residual * static_cast<double>(i) - 1e-12));
      auto& row = model.transition[ChartModel::state_index(i, a == 1)];
      const auto& inc = (*kernel)[start];
      for (std::size_t target = start; target < levels; ++target) {
        const double p = inc[target];
        if (p == 0.0) continue;
        row[ChartModel::state_index(target, true)] = p * alarm[target];
        row[ChartModel::state_index(target, false)] = p * (1.0 - alarm[target]);
      }
    }
  }

  model.cost_vector.resize(n_states);
  for (std::size_t i = 0; i < levels; ++i) {
    const double level = model.grid_levels[i];
    model.cost_vector[ChartModel::state_index(i, false)] =
        state_cost_per_unit_time(level, false, params, process, shift, costs);
    model.cost_vector[ChartModel::state_index(i, true)] =
        state_cost_per_unit_time(level, true, params, process, shift, costs);
  }

  model.stationary =
      stationary_distribution(model.transition, 1e-12, 100000, &model.stationary_residual);
  return model;
}

double expected_cost(const ChartModel& model) {
  double total = 0.0;
  for (std::size_t k = 0; k < model.stationary.size(); ++k)
    total += model.cost_vector[k] * model.stationary[k];
  return total;
}

}  // namespace ccopt
