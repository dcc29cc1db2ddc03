#pragma once

#include <cstdint>

#include "ccopt/shift_spec.hpp"

namespace ccopt {

// Arguments of the per-interval squared-deviation cost: interval length h,
// starting distance j from target, shift rate s, and the shift-size law.
struct IntervalCostInput {
  double h = 1.0;
  double j = 0.0;
  double s = 0.0;
  ShiftLaw shift;

  void validate() const;
};

// The integrated expected squared distance over one sampling interval.
// per_unit_time * h == integral exactly (integral is built from the
// per-unit-time value, not the other way round).
struct IntervalCostResult {
  double integral = 0.0;
  double per_unit_time = 0.0;
};

// E((X + JY + j)^2) where X is the sum of the exponential components and Y
// the sum of the geometric components of k stacked mixture shifts, closed
// form. Must agree with binomial_sum_square.
double expected_square_mixture(std::int64_t k, double j, const MixtureShiftSpec& spec);

// Same expectation evaluated as the explicit binomial sum over the number of
// geometric components; the brute-force oracle for expected_square_mixture.
double binomial_sum_square(std::int64_t k, double j, const MixtureShiftSpec& spec);

// E((X + Y)^2) for k stacked shifts of a generic 2-component mixture with
// per-variate moments, closed form. Must agree with
// binomial_sum_square_general.
double expected_square_general(std::int64_t k, const GenericComponentMoments& gm);

// Explicit binomial-sum oracle for expected_square_general.
double binomial_sum_square_general(std::int64_t k, const GenericComponentMoments& gm);

// Closed-form integral over [0,h] of the expected squared distance for the
// exponential-geometric mixture, starting at distance j. Requires the
// mixture variant of the shift law.
IntervalCostResult c2_mixture(const IntervalCostInput& input);

// Same for the generic 2-component law. Only derived for j = 0; a nonzero j
// is rejected with ParameterError. Requires the generic-moments variant.
IntervalCostResult c2_general(const IntervalCostInput& input);

// Independent numeric oracle: composite Gauss-Legendre quadrature of the
// Poisson-series integrand built from the per-count second-moment
// operations. Returns the undivided integral. Throws ToleranceError when the
// estimated quadrature + truncation error exceeds rel_tol * max(1, value).
double c2_series_oracle(const IntervalCostInput& input, std::int64_t k_max,
                        int n_quad, double rel_tol = 1e-9);

}  // namespace ccopt
