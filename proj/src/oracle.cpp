#include "ccopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "ccopt/errors.hpp"
#include "ccopt/moments.hpp"

namespace ccopt {

std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
  std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (stream_index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double RngStream::exponential(double mean) {
  return -mean * std::log(uniform_open01());
}

double RngStream::normal(double mean, double sd) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + sd * spare_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform_open01()));
  const double angle = 2.0 * std::numbers::pi * uniform_open01();
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return mean + sd * radius * std::cos(angle);
}

std::int64_t RngStream::geometric(double xi) {
  if (!(xi > 0.0 && xi <= 1.0)) throw ParameterError("geometric: xi must be in (0,1]");
  if (xi == 1.0) return 1;
  const double u = uniform_open01();
  const auto k = static_cast<std::int64_t>(std::ceil(std::log(u) / std::log1p(-xi)));
  return std::max<std::int64_t>(k, 1);
}

double sample_shift(const MixtureShiftSpec& spec, RngStream& rng) {
  if (spec.zeta > 0.0 && rng.uniform_open01() < spec.zeta)
    return spec.jump_scale * static_cast<double>(rng.geometric(spec.xi));
  return rng.exponential(spec.delta);
}

Trajectory simulate_trajectory(double start_level, double h, double s,
                               const MixtureShiftSpec& spec, RngStream& rng) {
  spec.validate();
  if (!(h > 0.0)) throw ParameterError("simulate_trajectory: h must be > 0");
  if (!(s >= 0.0)) throw ParameterError("simulate_trajectory: s must be >= 0");
  if (!(start_level >= 0.0))
    throw ParameterError("simulate_trajectory: start_level must be >= 0");
  Trajectory traj;
  traj.start_level = start_level;
  traj.horizon = h;
  if (s == 0.0) return traj;
  double t = rng.exponential(1.0 / s);
  while (t < h) {
    traj.jump_times.push_back(t);
    traj.jump_sizes.push_back(sample_shift(spec, rng));
    t += rng.exponential(1.0 / s);
  }
  return traj;
}

double pathwise_square_integral(const Trajectory& traj) {
  if (traj.jump_times.size() != traj.jump_sizes.size())
    throw ParameterError("pathwise_square_integral: jump time/size counts differ");
  double level = traj.start_level;
  double prev = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < traj.jump_times.size(); ++i) {
    total += level * level * (traj.jump_times[i] - prev);
    prev = traj.jump_times[i];
    level += traj.jump_sizes[i];
  }
  total += level * level * (traj.horizon - prev);
  return total;
}

namespace {

McEstimate summarize(const std::vector<double>& values, std::uint64_t seed) {
  const auto n = static_cast<std::int64_t>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sample_sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  McEstimate est;
  est.mean = mean;
  est.std_error = sample_sd / std::sqrt(static_cast<double>(n));
  est.n_paths = n;
  est.seed = seed;
  return est;
}

}  // namespace

McEstimate estimate_c2(double j, double h, double s, const MixtureShiftSpec& spec,
                       std::int64_t n_paths, std::uint64_t seed, int threads) {
  spec.validate();
  if (n_paths < 1000) throw ParameterError("estimate_c2: n_paths must be >= 1000");
  if (threads < 1) threads = 1;

  std::vector<double> values(static_cast<std::size_t>(n_paths), 0.0);
  const auto run_range = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t p = begin; p < end; ++p) {
      RngStream rng(substream_seed(seed, static_cast<std::uint64_t>(p)));
      values[static_cast<std::size_t>(p)] =
          pathwise_square_integral(simulate_trajectory(j, h, s, spec, rng));
    }
  };

  if (threads == 1) {
    run_range(0, n_paths);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t chunk = (n_paths + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const std::int64_t begin = w * chunk;
      const std::int64_t end = std::min<std::int64_t>(begin + chunk, n_paths);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return summarize(values, seed);
}

namespace {

struct ChartCycleState {
  double level = 0.0;  // post-repair level carried into the next interval
};

// One sampling cycle: accumulate shifts, observe with noise, decide the
// alarm, charge the chart cost mapping at the realized (pre-repair) level,
// repair. Returns the per-unit-time cost of the interval.
double run_cycle(ChartCycleState& st, const ChartParams& params,
                 const ProcessSpec& process, const MixtureShiftSpec& spec,
                 const CostSpec& costs, RngStream& rng, double* level_out,
                 bool* alarm_out) {
  const Trajectory traj =
      simulate_trajectory(st.level, params.h, process.s, spec, rng);
  double level = st.level;
  for (double size : traj.jump_sizes) level += size;
  const double observation = process.mu0 + level + rng.normal(0.0, process.sigma);
  const bool alarm = observation > params.K;
  const double cost =
      state_cost_per_unit_time(level, alarm, params, process, spec, costs);
  if (alarm)
    st.level = level > 0.0 ? process.repair_residual * level : 0.0;
  else
    st.level = level;
  if (level_out != nullptr) *level_out = level;
  if (alarm_out != nullptr) *alarm_out = alarm;
  return cost;
}

constexpr std::int64_t kChartBlocks = 100;

}  // namespace

McEstimate simulate_chart(const ChartParams& params, const ProcessSpec& process,
                          const MixtureShiftSpec& spec, const CostSpec& costs,
                          std::int64_t n_intervals, std::uint64_t seed) {
  params.validate();
  process.validate();
  spec.validate();
  costs.validate();
  if (n_intervals < 10000)
    throw ParameterError("simulate_chart: need at least 10000 intervals");

  RngStream rng(substream_seed(seed, 0));
  ChartCycleState st;

  const std::int64_t warmup = std::min<std::int64_t>(2000, n_intervals / 10);
  for (std::int64_t i = 0; i < warmup; ++i)
    run_cycle(st, params, process, spec, costs, rng, nullptr, nullptr);

  const std::int64_t block_len = n_intervals / kChartBlocks;
  std::vector<double> block_means(kChartBlocks, 0.0);
  for (std::int64_t b = 0; b < kChartBlocks; ++b) {
    double sum = 0.0;
    for (std::int64_t i = 0; i < block_len; ++i)
      sum += run_cycle(st, params, process, spec, costs, rng, nullptr, nullptr);
    block_means[static_cast<std::size_t>(b)] = sum / static_cast<double>(block_len);
  }
  return summarize(block_means, seed);
}

std::vector<double> simulate_chart_occupancy(const ChartParams& params,
                                             const ProcessSpec& process,
                                             const MixtureShiftSpec& spec,
                                             double step, double v_max,
                                             std::int64_t n_intervals,
                                             std::uint64_t seed) {
  params.validate();
  process.validate();
  spec.validate();
  if (!(step > 0.0) || !(v_max > 0.0))
    throw ParameterError("simulate_chart_occupancy: step and v_max must be > 0");
  const auto levels =
      static_cast<std::size_t>(std::llround(v_max / step)) + 1;

  RngStream rng(substream_seed(seed, 0));
  ChartCycleState st;
  const CostSpec costs;  // costs do not affect the dynamics
  std::vector<double> counts(2 * levels, 0.0);

  const std::int64_t warmup = std::min<std::int64_t>(2000, n_intervals / 10);
  for (std::int64_t i = 0; i < warmup; ++i)
    run_cycle(st, params, process, spec, costs, rng, nullptr, nullptr);

  for (std::int64_t i = 0; i < n_intervals; ++i) {
    double level = 0.0;
    bool alarm = false;
    run_cycle(st, params, process, spec, costs, rng, &level, &alarm);
    // nearest-level binning, matching the discretize() bucket convention
    const std::size_t idx = grid_bucket_index(level, step, levels);
    counts[ChartModel::state_index(idx, alarm)] += 1.0;
  }
  for (double& c : counts) c /= static_cast<double>(n_intervals);
  return counts;
}

}  // namespace ccopt
