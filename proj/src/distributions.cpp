#include "ccopt/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccopt/errors.hpp"
#include "ccopt/numerics.hpp"

namespace ccopt {

void MixtureShiftSpec::validate() const {
  if (!(zeta >= 0.0 && zeta <= 1.0))
    throw ParameterError("shift spec: zeta must be in [0,1], got " + std::to_string(zeta));
  if (!(xi > 0.0 && xi <= 1.0))
    throw ParameterError("shift spec: xi must be in (0,1], got " + std::to_string(xi));
  if (!(delta > 0.0))
    throw ParameterError("shift spec: delta must be > 0, got " + std::to_string(delta));
  if (!(jump_scale > 0.0))
    throw ParameterError("shift spec: jump_scale must be > 0, got " + std::to_string(jump_scale));
}

void GenericComponentMoments::validate() const {
  if (!(m_x >= 0.0) || !(m_y >= 0.0))
    throw ParameterError("component moments: means must be >= 0");
  if (!(v_x >= 0.0) || !(v_y >= 0.0))
    throw ParameterError("component moments: variances must be >= 0");
  if (!(zeta >= 0.0 && zeta <= 1.0))
    throw ParameterError("component moments: zeta must be in [0,1]");
}

void ShiftCountLaw::validate() const {
  if (!(rate > 0.0)) throw ParameterError("shift count law: rate must be > 0");
  if (!(time >= 0.0)) throw ParameterError("shift count law: time must be >= 0");
}

double ShiftCountLaw::pmf(std::int64_t k) const {
  validate();
  return poisson_pmf(k, mean());
}

std::vector<double> ShiftCountLaw::pmf_table(std::int64_t k_max) const {
  validate();
  return poisson_pmf_table(k_max, mean());
}

std::int64_t ShiftCountLaw::truncation_bound(double tail_tol) const {
  validate();
  return poisson_truncation_bound(mean(), tail_tol);
}

double geom_cdf(double x, double xi) {
  if (!(xi > 0.0 && xi <= 1.0))
    throw ParameterError("geom_cdf: xi must be in (0,1], got " + std::to_string(xi));
  if (x < 1.0) return 0.0;
  return 1.0 - std::pow(1.0 - xi, std::floor(x));
}

double negbin_pmf(std::int64_t x, std::int64_t r, double xi) {
  if (r < 1) throw ParameterError("negbin_pmf: r must be >= 1, got " + std::to_string(r));
  if (!(xi > 0.0 && xi <= 1.0))
    throw ParameterError("negbin_pmf: xi must be in (0,1], got " + std::to_string(xi));
  if (x < r) return 0.0;
  if (xi == 1.0) return x == r ? 1.0 : 0.0;
  const double xd = static_cast<double>(x);
  const double rd = static_cast<double>(r);
  return std::exp(log_choose(xd - 1.0, xd - rd) + rd * std::log(xi) +
                  (xd - rd) * std::log1p(-xi));
}

std::vector<double> erlang_cdf_orders(double x, std::int64_t n_max, double delta) {
  if (n_max < 0) throw ParameterError("erlang_cdf_orders: n_max must be >= 0");
  if (!(delta > 0.0)) throw ParameterError("erlang_cdf_orders: delta must be > 0");
  std::vector<double> cdf(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (x < 0.0) return cdf;  // order 0 handled below
  cdf[0] = 1.0;             // empty sum is degenerate at zero
  const double y = x / delta;
  // F_{E_n}(x) = P(Poisson(y) >= n): peel Poisson terms off 1 one by one.
  double term = std::exp(-y);
  double cum = 0.0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    cum += term;  // adds P(K = n-1)
    cdf[static_cast<std::size_t>(n)] = std::max(0.0, 1.0 - cum);
    term *= y / static_cast<double>(n);
  }
  return cdf;
}

double erlang_cdf(double x, std::int64_t n, double delta) {
  return erlang_cdf_orders(x, n, delta)[static_cast<std::size_t>(n)];
}

double mixture_cdf(double x, const MixtureShiftSpec& spec) {
  spec.validate();
  if (x < 0.0) return 0.0;
  const double exp_part = -std::expm1(-x / spec.delta);
  double geom_part = 0.0;
  if (spec.zeta > 0.0) geom_part = geom_cdf(x / spec.jump_scale, spec.xi);
  return spec.zeta * geom_part + (1.0 - spec.zeta) * exp_part;
}

namespace {

// Number of geometric-lattice points at or below x (lattice J, 2J, ...),
// with a small relative nudge so points landing exactly on the lattice are
// kept despite rounding in x / J.
std::int64_t lattice_count(double x, double jump_scale) {
  if (x < 0.0) return 0;
  const double q = x / jump_scale;
  return static_cast<std::int64_t>(std::floor(q + q * 1e-12 + 1e-12));
}

}  // namespace

double sum_cdf_given_n_r(double x, std::int64_t n, std::int64_t r,
                         const MixtureShiftSpec& spec) {
  spec.validate();
  if (n < 0) throw ParameterError("sum_cdf_given_n_r: n must be >= 0");
  if (r < 0 || r > n)
    throw ParameterError("sum_cdf_given_n_r: need 0 <= r <= n, got r=" + std::to_string(r) +
                         " n=" + std::to_string(n));
  if (r == 0) return erlang_cdf(x, n, spec.delta);
  if (x < 0.0) return 0.0;
  const std::int64_t m_max = lattice_count(x, spec.jump_scale);
  if (m_max < r) return 0.0;
  double total = 0.0;
  for (std::int64_t m = r; m <= m_max; ++m) {
    const double rest = x - static_cast<double>(m) * spec.jump_scale;
    total += erlang_cdf(std::max(rest, 0.0), n - r, spec.delta) * negbin_pmf(m, r, spec.xi);
  }
  return std::min(total, 1.0);
}

double sum_cdf_given_n(double x, std::int64_t n, const MixtureShiftSpec& spec) {
  spec.validate();
  if (n < 0) throw ParameterError("sum_cdf_given_n: n must be >= 0");
  if (x < 0.0) return 0.0;
  if (n == 0) return 1.0;  // zero shifts sum to zero
  double total = 0.0;
  for (std::int64_t r = 0; r <= n; ++r) {
    const double w = binomial_pmf(r, n, spec.zeta);
    if (w > 0.0) total += w * sum_cdf_given_n_r(x, n, r, spec);
  }
  return std::min(total, 1.0);
}

ProcessDistribution::ProcessDistribution(const MixtureShiftSpec& spec, double s, double t,
                                         std::int64_t k_max, double tail_tol)
    : spec_(spec), s_(s), t_(t), k_max_(k_max) {
  spec_.validate();
  if (!(s > 0.0)) throw ParameterError("process distribution: s must be > 0");
  if (t < 0.0) throw ParameterError("process distribution: t must be >= 0");
  if (k_max < 0) throw ParameterError("process distribution: k_max must be >= 0");
  poisson_ = ShiftCountLaw{s, t}.pmf_table(k_max);
  double cum = 0.0;
  for (double p : poisson_) cum += p;
  if (1.0 - cum > tail_tol)
    throw TruncationError("process distribution: Poisson tail beyond k_max=" +
                          std::to_string(k_max) + " is " + std::to_string(1.0 - cum) +
                          ", above tolerance " + std::to_string(tail_tol));
}

double ProcessDistribution::cdf(double x) const {
  if (x < 0.0) return 0.0;
  double z = poisson_[0];  // atom at zero: no shift occurred
  if (k_max_ == 0) return std::min(z, 1.0);

  const std::size_t k_max = static_cast<std::size_t>(k_max_);
  const std::int64_t m_max = lattice_count(x, spec_.jump_scale);
  const std::size_t m_count = static_cast<std::size_t>(m_max);

  // Erlang CDFs of every order at x and at each lattice remainder, one
  // O(k_max) pass per point.
  const auto erl_at_x = erlang_cdf_orders(x, k_max_, spec_.delta);
  std::vector<std::vector<double>> erl_rest(m_count + 1);
  std::vector<std::vector<double>> nb(m_count + 1);  // nb[m][r], r = 1..min(m,k_max)
  for (std::size_t m = 1; m <= m_count; ++m) {
    const double rest =
        std::max(x - static_cast<double>(m) * spec_.jump_scale, 0.0);
    erl_rest[m] = erlang_cdf_orders(rest, k_max_, spec_.delta);
    const std::size_t r_top = std::min(m, k_max);
    nb[m].assign(r_top + 1, 0.0);
    for (std::size_t r = 1; r <= r_top; ++r)
      nb[m][r] = negbin_pmf(static_cast<std::int64_t>(m), static_cast<std::int64_t>(r),
                            spec_.xi);
  }

  for (std::size_t k = 1; k <= k_max; ++k) {
    const double weight = poisson_[k];
    if (weight <= 0.0) continue;
    double f_given_k = 0.0;
    for (std::size_t r = 0; r <= k; ++r) {
      const double w = binomial_pmf(static_cast<std::int64_t>(r),
                                    static_cast<std::int64_t>(k), spec_.zeta);
      if (w <= 0.0) continue;
      double f = 0.0;
      if (r == 0) {
        f = erl_at_x[k];
      } else if (static_cast<std::size_t>(m_max) >= r) {
        for (std::size_t m = r; m <= m_count; ++m)
          if (r < nb[m].size()) f += erl_rest[m][k - r] * nb[m][r];
      }
      f_given_k += w * f;
    }
    z += weight * std::min(f_given_k, 1.0);
  }
  return std::min(z, 1.0);
}

double process_cdf(double x, double t, double s, const MixtureShiftSpec& spec,
                   std::int64_t k_max, double tail_tol) {
  return ProcessDistribution(spec, s, t, k_max, tail_tol).cdf(x);
}

}  // namespace ccopt
