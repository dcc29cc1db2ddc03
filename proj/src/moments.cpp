#include "ccopt/moments.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "ccopt/errors.hpp"
#include "ccopt/numerics.hpp"

namespace ccopt {

void IntervalCostInput::validate() const {
  if (!(h > 0.0)) throw ParameterError("interval cost: h must be > 0");
  if (!(j >= 0.0)) throw ParameterError("interval cost: j must be >= 0");
  if (!(s >= 0.0)) throw ParameterError("interval cost: s must be >= 0");
  std::visit([](const auto& law) { law.validate(); }, shift);
}

double expected_square_mixture(std::int64_t k, double j, const MixtureShiftSpec& spec) {
  spec.validate();
  if (k < 1) throw ParameterError("expected_square_mixture: k must be >= 1");
  if (!(j >= 0.0)) throw ParameterError("expected_square_mixture: j must be >= 0");
  const double kd = static_cast<double>(k);
  const double z = spec.zeta;
  const double xi = spec.xi;
  const double d = spec.delta;
  const double J = spec.jump_scale;
  const double lin = j - kd * d * (z - 1.0);
  return kd * d * d + lin * lin +
         (2.0 * kd * z * J * (j + d * (kd + z - kd * z - 1.0)) - xi * kd * (d * z) * (d * z)) / xi +
         kd * z * J * J * (2.0 - xi + z * (kd - 1.0)) / (xi * xi);
}

double binomial_sum_square(std::int64_t k, double j, const MixtureShiftSpec& spec) {
  spec.validate();
  if (k < 1) throw ParameterError("binomial_sum_square: k must be >= 1");
  if (!(j >= 0.0)) throw ParameterError("binomial_sum_square: j must be >= 0");
  const double xi = spec.xi;
  const double d = spec.delta;
  const double J = spec.jump_scale;
  double total = 0.0;
  for (std::int64_t r = 0; r <= k; ++r) {
    const double w = binomial_pmf(r, k, spec.zeta);
    if (w == 0.0) continue;
    const double nx = static_cast<double>(k - r);  // exponential summands
    const double ny = static_cast<double>(r);      // geometric summands
    const double ex = nx * d;                      // E(X)
    const double ey = J * ny / xi;                 // E(JY)
    const double term = ex * ex + nx * d * d       // E(X^2)
                        + ey * ey + J * J * ny * (1.0 - xi) / (xi * xi)  // E((JY)^2)
                        + j * j + 2.0 * ex * ey + 2.0 * ex * j + 2.0 * ey * j;
    total += w * term;
  }
  return total;
}

double expected_square_general(std::int64_t k, const GenericComponentMoments& gm) {
  gm.validate();
  if (k < 1) throw ParameterError("expected_square_general: k must be >= 1");
  const double kd = static_cast<double>(k);
  const double z = gm.zeta;
  const double dm = gm.m_x - gm.m_y;
  return kd * (gm.m_x * gm.m_x * kd + gm.v_x - z * gm.v_x +
               z * (gm.v_y - dm * (gm.m_y + gm.m_x * (2.0 * kd - 1.0))) +
               z * z * dm * dm * (kd - 1.0));
}

double binomial_sum_square_general(std::int64_t k, const GenericComponentMoments& gm) {
  gm.validate();
  if (k < 1) throw ParameterError("binomial_sum_square_general: k must be >= 1");
  double total = 0.0;
  for (std::int64_t r = 0; r <= k; ++r) {
    const double w = binomial_pmf(r, k, gm.zeta);
    if (w == 0.0) continue;
    const double nx = static_cast<double>(k - r);
    const double ny = static_cast<double>(r);
    total += w * (nx * gm.m_x * nx * gm.m_x + nx * gm.v_x + ny * gm.m_y * ny * gm.m_y +
                  ny * gm.v_y + 2.0 * nx * gm.m_x * ny * gm.m_y);
  }
  return total;
}

namespace {

// The per-count second moment is quadratic in the shift count k, so mixing
// over a Poisson count with mean u = s*t (E K = u, E K^2 = u + u^2) turns the
// integrand into j^2 + a u + b u^2. Termwise integration over [0,h] then
// gives the closed forms below.
struct QuadCoeffs {
  double a = 0.0;
  double b = 0.0;
};

QuadCoeffs mixture_coeffs(double j, const MixtureShiftSpec& spec) {
  const double drift = spec.delta * (1.0 - spec.zeta) + spec.zeta * spec.jump_scale / spec.xi;
  QuadCoeffs c;
  c.a = 2.0 * j * drift + 2.0 * spec.delta * spec.delta * (1.0 - spec.zeta) +
        spec.zeta * (2.0 - spec.xi) * spec.jump_scale * spec.jump_scale / (spec.xi * spec.xi);
  c.b = drift * drift;
  return c;
}

QuadCoeffs general_coeffs(const GenericComponentMoments& gm) {
  const double drift = gm.m_x - gm.zeta * (gm.m_x - gm.m_y);
  QuadCoeffs c;
  c.a = gm.m_x * gm.m_x + gm.v_x +
        gm.zeta * (gm.m_y * gm.m_y + gm.v_y - gm.m_x * gm.m_x - gm.v_x);
  c.b = drift * drift;
  return c;
}

IntervalCostResult integrate_quadratic(double h, double s, double j, const QuadCoeffs& c) {
  IntervalCostResult result;
  result.per_unit_time = j * j + c.a * s * h / 2.0 + c.b * s * s * h * h / 3.0;
  result.integral = result.per_unit_time * h;
  return result;
}

}  // namespace

IntervalCostResult c2_mixture(const IntervalCostInput& input) {
  input.validate();
  const auto* spec = std::get_if<MixtureShiftSpec>(&input.shift);
  if (spec == nullptr)
    throw ParameterError("c2_mixture: input must carry a mixture shift spec");
  return integrate_quadratic(input.h, input.s, input.j, mixture_coeffs(input.j, *spec));
}

IntervalCostResult c2_general(const IntervalCostInput& input) {
  input.validate();
  const auto* gm = std::get_if<GenericComponentMoments>(&input.shift);
  if (gm == nullptr)
    throw ParameterError("c2_general: input must carry generic component moments");
  if (input.j != 0.0)
    throw ParameterError("c2_general: only derived for j = 0, got j = " +
                         std::to_string(input.j));
  return integrate_quadratic(input.h, input.s, 0.0, general_coeffs(*gm));
}

double c2_series_oracle(const IntervalCostInput& input, std::int64_t k_max, int n_quad,
                        double rel_tol) {
  input.validate();
  if (k_max < 1) throw ParameterError("c2_series_oracle: k_max must be >= 1");
  if (n_quad < 1) throw ParameterError("c2_series_oracle: n_quad must be >= 1");
  if (std::holds_alternative<GenericComponentMoments>(input.shift) && input.j != 0.0)
    throw ParameterError("c2_series_oracle: generic moments only support j = 0");

  const double h = input.h;
  const double s = input.s;
  const double j = input.j;
  if (s == 0.0) return h * j * j;  // no shifts: the integrand is the constant j^2

  // Second moments per shift count, independent of t.
  const std::int64_t k_extra = 256;  // extension used for the truncation estimate
  std::vector<double> sq(static_cast<std::size_t>(k_max + k_extra) + 1, 0.0);
  for (std::int64_t k = 1; k <= k_max + k_extra; ++k) {
    sq[static_cast<std::size_t>(k)] = std::visit(
        [&](const auto& law) {
          using T = std::decay_t<decltype(law)>;
          if constexpr (std::is_same_v<T, MixtureShiftSpec>)
            return expected_square_mixture(k, j, law);
          else
            return expected_square_general(k, law);
        },
        input.shift);
  }

  const auto integrand = [&](double t) {
    const double mean = s * t;
    double term = std::exp(-mean);
    double value = term * j * j;
    for (std::int64_t k = 1; k <= k_max; ++k) {
      term *= mean / static_cast<double>(k);
      value += term * sq[static_cast<std::size_t>(k)];
    }
    return value;
  };

  const double coarse = gauss_legendre(integrand, 0.0, h, std::max(1, n_quad / 2));
  const double value = gauss_legendre(integrand, 0.0, h, n_quad);
  const double quad_err = std::abs(value - coarse);

  // The Poisson weight of a fixed k is unimodal in t with its peak at
  // t = k/s, so over [0,h] it is bounded by the weight at t = h when
  // k >= s*h and by the modal value otherwise. That bounds the neglected
  // integral by h times the capped tail sum.
  const auto tail_pmf = poisson_pmf_table(k_max + k_extra, s * h);
  double trunc_err = 0.0;
  for (std::int64_t k = k_max + 1; k <= k_max + k_extra; ++k) {
    const double cap = static_cast<double>(k) >= s * h
                           ? tail_pmf[static_cast<std::size_t>(k)]
                           : poisson_pmf(k, static_cast<double>(k));
    trunc_err += cap * sq[static_cast<std::size_t>(k)];
  }
  trunc_err *= h;

  const double budget = rel_tol * std::max(1.0, std::abs(value));
  if (quad_err + trunc_err > budget)
    throw ToleranceError("c2_series_oracle: estimated error " +
                         std::to_string(quad_err + trunc_err) + " (quadrature " +
                         std::to_string(quad_err) + ", truncation " +
                         std::to_string(trunc_err) + ") exceeds budget " +
                         std::to_string(budget));
  return value;
}

}  // namespace ccopt
