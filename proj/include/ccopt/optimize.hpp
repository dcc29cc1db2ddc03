#pragma once

#include <string>
#include <vector>

#include "ccopt/chart.hpp"

namespace ccopt {

// Evenly spaced parameter values from min to max inclusive; count == 1
// degenerates to {min}.
struct RangeSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  std::vector<double> values() const;
  void validate(const char* name) const;
};

struct SearchSpace {
  RangeSpec h_range;
  RangeSpec K_range;

  void validate() const;
};

// One evaluated grid point. Failed model constructions are recorded, not
// fatal to the sweep.
struct SurfacePoint {
  double h = 0.0;
  double K = 0.0;
  double cost = 0.0;
  bool ok = false;
  std::string error;
};

struct Optimum {
  ChartParams best_params;
  double best_cost = 0.0;
  std::vector<SurfacePoint> surface;  // h-major, K-minor order
};

// Exhaustive sweep of E(C) over the (h, K) grid. The level kernel and the
// per-level interval costs depend on h only, so the sweep groups work by h.
// Results are gathered by grid index, making parallel and serial runs
// identical. Ties break toward smaller h, then smaller K. Throws
// ParameterError if every point failed.
Optimum grid_search(const SearchSpace& space, const ProcessSpec& process,
                    const MixtureShiftSpec& shift, const CostSpec& costs,
                    double step, double v_max, int threads = 1);

}  // namespace ccopt
