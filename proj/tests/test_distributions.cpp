#include <cmath>
#include <random>

#include "ccopt/distributions.hpp"
#include "ccopt/errors.hpp"
#include "ccopt/numerics.hpp"
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

MixtureShiftSpec random_spec(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return make_spec(unif(gen), 0.1 + 0.8 * unif(gen), 0.2 + 4.8 * unif(gen),
                   0.5 + 2.5 * unif(gen));
}

}  // namespace

TEST_CASE("ShiftCountLaw is the Poisson count of shifts") {
  const ShiftCountLaw law{0.5, 2.0};  // mean 1
  CHECK(law.mean() == 1.0);
  CHECK(law.pmf(0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  const auto table = law.pmf_table(law.truncation_bound(1e-12));
  double sum = 0.0;
  for (double p : table) sum += p;
  CHECK(std::abs(sum - 1.0) < 1e-12);
  CHECK_THROWS_AS((ShiftCountLaw{0.0, 1.0}.pmf(0)), ParameterError);
  CHECK_THROWS_AS((ShiftCountLaw{1.0, -1.0}.pmf(0)), ParameterError);
}

TEST_CASE("geom_cdf step function") {
  CHECK(geom_cdf(0.5, 0.3) == 0.0);
  CHECK(geom_cdf(1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(geom_cdf(3.0, 0.5) == doctest::Approx(0.875).epsilon(1e-15));
  // right-continuous step: constant on [m, m+1)
  CHECK(geom_cdf(1.999, 0.3) == geom_cdf(1.0, 0.3));
  CHECK(geom_cdf(2.0, 0.3) > geom_cdf(1.0, 0.3));
  CHECK(geom_cdf(5.0, 1.0) == 1.0);
  CHECK_THROWS_AS(geom_cdf(1.0, 0.0), ParameterError);
  CHECK_THROWS_AS(geom_cdf(1.0, 1.5), ParameterError);
}

TEST_CASE("negbin_pmf examples and domain") {
  CHECK(negbin_pmf(5, 1, 0.2) == doctest::Approx(0.08192).epsilon(1e-13));
  CHECK(negbin_pmf(3, 3, 0.4) == doctest::Approx(0.064).epsilon(1e-13));
  CHECK(negbin_pmf(3, 2, 0.5) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(negbin_pmf(2, 3, 0.4) == 0.0);  // below support
  CHECK(negbin_pmf(4, 4, 1.0) == 1.0);
  CHECK(negbin_pmf(5, 4, 1.0) == 0.0);
  CHECK_THROWS_AS(negbin_pmf(3, 0, 0.4), ParameterError);
  CHECK_THROWS_AS(negbin_pmf(3, -2, 0.4), ParameterError);
}

TEST_CASE("negbin_pmf sums to one over its support") {
  for (const auto& [r, xi] : std::vector<std::pair<std::int64_t, double>>{
           {1, 0.2}, {3, 0.3}, {5, 0.7}, {10, 0.45}}) {
    double sum = 0.0;
    std::int64_t x = r;
    // extend until the remaining tail is provably negligible
    while (x < 20000) {
      const double term = negbin_pmf(x, r, xi);
      sum += term;
      if (x > r + 10 && term < 1e-18) break;
      ++x;
    }
    CHECK(std::abs(sum - 1.0) < 1e-10);
  }
}

TEST_CASE("erlang_cdf examples") {
  CHECK(erlang_cdf(0.0, 0, 1.0) == 1.0);
  CHECK(erlang_cdf(123.0, 0, 1.0) == 1.0);
  CHECK(erlang_cdf(-0.001, 0, 1.0) == 0.0);
  CHECK(erlang_cdf(0.0, 1, 2.0) == 0.0);
  CHECK(erlang_cdf(1.0, 1, 1.0) == doctest::Approx(0.63212055882855768).epsilon(1e-14));
  // order 2: 1 - e^-y (1 + y)
  const double y = 10.0;
  CHECK(erlang_cdf(10.0, 2, 1.0) ==
        doctest::Approx(1.0 - std::exp(-y) * (1.0 + y)).epsilon(1e-14));
  CHECK(erlang_cdf(-5.0, 3, 1.0) == 0.0);
  CHECK_THROWS_AS(erlang_cdf(1.0, -1, 1.0), ParameterError);
  CHECK_THROWS_AS(erlang_cdf(1.0, 2, 0.0), ParameterError);
}

TEST_CASE("erlang_cdf_orders agrees with per-order evaluation") {
  const auto orders = erlang_cdf_orders(3.5, 12, 0.8);
  for (std::int64_t n = 0; n <= 12; ++n)
    CHECK(orders[static_cast<std::size_t>(n)] ==
          doctest::Approx(erlang_cdf(3.5, n, 0.8)).epsilon(1e-15));
}

TEST_CASE("mixture_cdf combines the branches") {
  const auto spec = make_spec(0.5, 0.3, 1.0);
  CHECK(mixture_cdf(-0.5, spec) == 0.0);
  CHECK(mixture_cdf(1.0, spec) == doctest::Approx(0.46606027941427884).epsilon(1e-14));
  const auto pure_exp = make_spec(0.0, 0.5, 2.0);
  CHECK(mixture_cdf(3.0, pure_exp) ==
        doctest::Approx(1.0 - std::exp(-1.5)).epsilon(1e-14));
  // jump_scale rescales the geometric lattice
  const auto scaled = make_spec(1.0, 0.4, 1.0, 2.0);
  CHECK(mixture_cdf(1.9, scaled) == 0.0);
  CHECK(mixture_cdf(2.0, scaled) == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("sum_cdf_given_n_r examples") {
  const auto spec = make_spec(0.5, 0.5, 1.0);
  CHECK(sum_cdf_given_n_r(10.0, 2, 0, spec) ==
        doctest::Approx(0.99950060077261267).epsilon(1e-13));
  CHECK(sum_cdf_given_n_r(0.5, 2, 1, spec) == 0.0);  // lattice floor below r
  CHECK(sum_cdf_given_n_r(2.5, 2, 2, spec) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK_THROWS_AS(sum_cdf_given_n_r(1.0, 2, 3, spec), ParameterError);
}

TEST_CASE("sum_cdf_given_n degenerate cases") {
  const auto spec = make_spec(0.5, 0.3, 1.0);
  CHECK(sum_cdf_given_n(0.0, 0, spec) == 1.0);
  CHECK(sum_cdf_given_n(7.0, 0, spec) == 1.0);
  CHECK(sum_cdf_given_n(-1.0, 0, spec) == 0.0);
  const auto pure_exp = make_spec(0.0, 0.3, 0.7);
  for (double x : {0.5, 1.0, 2.5, 9.0})
    CHECK(sum_cdf_given_n(x, 3, pure_exp) ==
          doctest::Approx(erlang_cdf(x, 3, 0.7)).epsilon(1e-14));
}

TEST_CASE("single-shift sum equals the mixture CDF pointwise") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto spec = random_spec(gen);
    for (int i = 0; i < 50; ++i) {
      const double x = 12.0 * unif(gen);
      CHECK(sum_cdf_given_n(x, 1, spec) ==
            doctest::Approx(mixture_cdf(x, spec)).epsilon(1e-12));
    }
  }
}

TEST_CASE("CDFs are monotone and within [0,1] on random grids") {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto spec = random_spec(gen);
    const std::int64_t n = 1 + static_cast<std::int64_t>(unif(gen) * 5);
    double prev_sum = 0.0;
    double prev_mix = 0.0;
    for (int i = 0; i <= 120; ++i) {
      const double x = 0.25 * i;
      const double fm = mixture_cdf(x, spec);
      const double fs = sum_cdf_given_n(x, n, spec);
      CHECK(fm >= prev_mix - 1e-15);
      CHECK(fs >= prev_sum - 1e-15);
      CHECK(fm >= 0.0);
      CHECK(fm <= 1.0);
      CHECK(fs >= 0.0);
      CHECK(fs <= 1.0);
      prev_mix = fm;
      prev_sum = fs;
    }
  }
}

TEST_CASE("process_cdf examples") {
  const auto spec = make_spec(0.5, 0.5, 1.0);
  const std::int64_t k_max = poisson_truncation_bound(1.0, 1e-12);
  CHECK(process_cdf(-1.0, 2.0, 0.5, spec, k_max) == 0.0);
  CHECK(process_cdf(0.0, 2.0, 0.5, spec, k_max) ==
        doctest::Approx(0.36787944117144232).epsilon(1e-13));
  CHECK(process_cdf(0.0, 0.0, 0.5, spec, 0) == 1.0);
  CHECK(process_cdf(5.0, 0.0, 0.5, spec, 0) == 1.0);
}

TEST_CASE("process_cdf tends to one and is monotone in t") {
  const auto spec = make_spec(0.3, 0.4, 1.5, 1.2);
  const double s = 0.8;
  const double t = 2.0;
  const std::int64_t k_max = poisson_truncation_bound(s * t, 1e-12);
  CHECK(process_cdf(300.0, t, s, spec, k_max) == doctest::Approx(1.0).epsilon(1e-10));
  // for fixed x > 0 more elapsed time only piles mass higher
  const double x = 2.0;
  double prev = 1.0;
  for (double tt : {0.5, 1.0, 2.0, 4.0}) {
    const std::int64_t km = poisson_truncation_bound(s * tt, 1e-12);
    const double z = process_cdf(x, tt, s, spec, km);
    CHECK(z <= prev + 1e-12);
    prev = z;
  }
}

TEST_CASE("process_cdf reports insufficient truncation") {
  const auto spec = make_spec(0.5, 0.5, 1.0);
  CHECK_THROWS_AS(process_cdf(1.0, 10.0, 2.0, spec, 3), TruncationError);
}

TEST_CASE("ProcessDistribution matches the one-shot evaluation") {
  const auto spec = make_spec(0.6, 0.35, 0.9, 1.4);
  const double s = 1.1;
  const double t = 1.7;
  const std::int64_t k_max = poisson_truncation_bound(s * t, 1e-12);
  ProcessDistribution z(spec, s, t, k_max);
  const auto pmf = poisson_pmf_table(k_max, s * t);
  for (double x : {0.0, 0.3, 1.0, 1.4, 2.8, 5.0, 9.0}) {
    double direct = pmf[0];
    for (std::int64_t k = 1; k <= k_max; ++k)
      direct += pmf[static_cast<std::size_t>(k)] * sum_cdf_given_n(x, k, spec);
    CHECK(z.cdf(x) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("simulated shift sums stay inside the DKW band (scaled lattice)") {
  // jump_scale != 1 exercises the rescaled convolution lattice
  const auto spec = make_spec(0.45, 0.4, 1.0, 1.5);
  const std::size_t n_draws = 20000;
  for (std::int64_t n : {1, 2}) {
    std::vector<double> sums(n_draws, 0.0);
    for (std::size_t i = 0; i < n_draws; ++i) {
      RngStream rng(substream_seed(0xD15Cu + static_cast<std::uint64_t>(n), i));
      double total = 0.0;
      for (std::int64_t k = 0; k < n; ++k) total += sample_shift(spec, rng);
      sums[i] = total;
    }
    const double stat = test_support::ks_statistic(
        sums, [&](double x) { return sum_cdf_given_n(x, n, spec); });
    CHECK(stat < test_support::dkw_epsilon(n_draws, 0.01));
  }
}
