#include <cmath>

#include "ccopt/distributions.hpp"
#include "ccopt/errors.hpp"
#include "ccopt/moments.hpp"
#include "ccopt/oracle.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ccopt;

namespace {

MixtureShiftSpec make_spec(double zeta, double xi, double delta, double jump_scale = 1.0) {
  MixtureShiftSpec spec;
  spec.zeta = zeta;
  spec.xi = xi;
  spec.delta = delta;
  spec.jump_scale = jump_scale;
  return spec;
}

IntervalCostInput make_input(double h, double j, double s, const MixtureShiftSpec& spec) {
  IntervalCostInput input;
  input.h = h;
  input.j = j;
  input.s = s;
  input.shift = spec;
  return input;
}

}  // namespace

TEST_CASE("substream seeds are spread out") {
  const std::uint64_t a = substream_seed(42, 0);
  const std::uint64_t b = substream_seed(42, 1);
  const std::uint64_t c = substream_seed(43, 0);
  CHECK(a != b);
  CHECK(a != c);
  CHECK(substream_seed(42, 0) == a);
}

TEST_CASE("sample_shift degenerate branches") {
  RngStream rng(1234);
  const auto pure_exp = make_spec(0.0, 0.5, 2.5);
  const std::size_t n = 1000000;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double draw = sample_shift(pure_exp, rng);
    CHECK(draw > 0.0);
    sum += draw;
  }
  // exponential mean within 4 standard errors (sd = mean for exponentials)
  const double se = 2.5 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(sum / static_cast<double>(n) - 2.5) < 4.0 * se);

  const auto degenerate = make_spec(1.0, 1.0, 1.0, 2.0);
  for (int i = 0; i < 100; ++i) CHECK(sample_shift(degenerate, rng) == 2.0);
}

TEST_CASE("sample_shift matches the mixture CDF in the DKW band") {
  const auto spec = make_spec(0.5, 0.3, 1.0, 1.0);
  const std::size_t n = 100000;
  std::vector<double> draws(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng(substream_seed(777, i));
    draws[i] = sample_shift(spec, rng);
  }
  const double stat = test_support::ks_statistic(
      draws, [&](double x) { return mixture_cdf(x, spec); });
  CHECK(stat < test_support::dkw_epsilon(n, 0.01));
}

TEST_CASE("simulate_trajectory basics") {
  const auto spec = make_spec(0.5, 0.5, 1.0);
  RngStream rng(99);
  const auto quiet = simulate_trajectory(1.5, 2.0, 0.0, spec, rng);
  CHECK(quiet.jump_times.empty());
  CHECK(quiet.jump_sizes.empty());
  CHECK(quiet.start_level == 1.5);

  const double s = 1.3;
  const double h = 2.0;
  const std::size_t n = 100000;
  double count_sum = 0.0;
  double count_sumsq = 0.0;
  std::size_t empty = 0;
  for (std::size_t i = 0; i < n; ++i) {
    RngStream path_rng(substream_seed(31337, i));
    const auto traj = simulate_trajectory(0.0, h, s, spec, path_rng);
    REQUIRE(traj.jump_times.size() == traj.jump_sizes.size());
    for (std::size_t t = 0; t + 1 < traj.jump_times.size(); ++t)
      CHECK(traj.jump_times[t] < traj.jump_times[t + 1]);
    for (double tt : traj.jump_times) {
      CHECK(tt > 0.0);
      CHECK(tt < h);
    }
    const double c = static_cast<double>(traj.jump_times.size());
    count_sum += c;
    count_sumsq += c * c;
    if (traj.jump_times.empty()) ++empty;
  }
  const double nd = static_cast<double>(n);
  const double mean_count = count_sum / nd;
  const double sd_count = std::sqrt((count_sumsq / nd - mean_count * mean_count));
  CHECK(std::abs(mean_count - s * h) < 4.0 * sd_count / std::sqrt(nd));

  const double p_empty = static_cast<double>(empty) / nd;
  const double p_ref = std::exp(-s * h);
  const double se_p = std::sqrt(p_ref * (1.0 - p_ref) / nd);
  CHECK(std::abs(p_empty - p_ref) < 4.0 * se_p);
}

TEST_CASE("pathwise_square_integral piecewise values") {
  Trajectory flat;
  flat.start_level = 2.0;
  flat.horizon = 3.0;
  CHECK(pathwise_square_integral(flat) == doctest::Approx(12.0).epsilon(1e-15));

  Trajectory one_jump;
  one_jump.start_level = 0.0;
  one_jump.horizon = 2.0;
  one_jump.jump_times = {1.0};
  one_jump.jump_sizes = {1.0};
  CHECK(pathwise_square_integral(one_jump) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("estimate_c2 brackets the closed form across the mixing range") {
  const double h = 1.5;
  const double j = 0.5;
  const double s = 0.8;
  int idx = 0;
  for (double zeta : {0.0, 0.5, 1.0}) {
    const auto spec = make_spec(zeta, 0.4, 1.2, 1.0);
    const auto est = estimate_c2(j, h, s, spec, 40000, 9000 + idx++);
    const double closed = c2_mixture(make_input(h, j, s, spec)).integral;
    CHECK(std::abs(est.mean - closed) < 4.0 * est.std_error);
    CHECK(est.std_error > 0.0);
    CHECK(est.n_paths == 40000);
  }
}

TEST_CASE("estimate_c2 is reproducible and thread-count independent") {
  const auto spec = make_spec(0.3, 0.5, 1.0, 1.5);
  const auto a = estimate_c2(1.0, 2.0, 0.7, spec, 20000, 4242, 1);
  const auto b = estimate_c2(1.0, 2.0, 0.7, spec, 20000, 4242, 1);
  const auto c = estimate_c2(1.0, 2.0, 0.7, spec, 20000, 4242, 4);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK(a.mean == c.mean);
  CHECK(a.std_error == c.std_error);
  const auto other_seed = estimate_c2(1.0, 2.0, 0.7, spec, 20000, 4243, 1);
  CHECK(a.mean != other_seed.mean);
}

TEST_CASE("simulate_chart degenerate cost flows") {
  const auto spec = make_spec(0.5, 0.5, 1.0);
  ProcessSpec process;
  process.mu0 = 0.0;
  process.sigma = 1.0;
  process.repair_residual = 0.0;
  CostSpec costs;
  costs.c_s = 3.0;
  costs.c_f = 7.0;

  // no shifts, alarm threshold unreachable: only the sampling cost accrues
  process.s = 0.0;
  const auto quiet = simulate_chart({2.0, 1e9}, process, spec, costs, 10000, 1);
  CHECK(quiet.mean == doctest::Approx(3.0 / 2.0).epsilon(1e-15));
  CHECK(quiet.std_error == 0.0);

  // threshold below any observation: every interval raises a (false) alarm
  const auto noisy = simulate_chart({2.0, -1e9}, process, spec, costs, 10000, 1);
  CHECK(noisy.mean == doctest::Approx((3.0 + 7.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("simulate_chart is reproducible") {
  const auto spec = make_spec(0.5, 0.5, 1.0);
  ProcessSpec process;
  process.s = 0.2;
  CostSpec costs;
  costs.c_s = 1.0;
  costs.c_f = 10.0;
  costs.c_rb = 20.0;
  costs.c_rs = 5.0;
  costs.c_os = 20.0;
  costs.c_ob = 5.0;
  const ChartParams params{1.0, 2.5};
  const auto a = simulate_chart(params, process, spec, costs, 10000, 77);
  const auto b = simulate_chart(params, process, spec, costs, 10000, 77);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
}
