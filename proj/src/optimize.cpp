#include "ccopt/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "ccopt/errors.hpp"

namespace ccopt {

std::vector<double> RangeSpec::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    out.push_back(min);
    return out;
  }
  const double stride = (max - min) / static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) out.push_back(min + stride * i);
  return out;
}

void RangeSpec::validate(const char* name) const {
  if (count < 1)
    throw ParameterError(std::string(name) + ": count must be >= 1");
  if (count > 1 && !(max > min))
    throw ParameterError(std::string(name) + ": max must exceed min when count > 1");
  if (!std::isfinite(min) || !std::isfinite(max))
    throw ParameterError(std::string(name) + ": bounds must be finite");
}

void SearchSpace::validate() const {
  h_range.validate("h_range");
  K_range.validate("K_range");
  if (!(h_range.min > 0.0)) throw ParameterError("h_range: values must be > 0");
}

Optimum grid_search(const SearchSpace& space, const ProcessSpec& process,
                    const MixtureShiftSpec& shift, const CostSpec& costs,
                    double step, double v_max, int threads) {
  space.validate();
  process.validate();
  shift.validate();
  costs.validate();
  if (threads < 1) threads = 1;

  const std::vector<double> hs = space.h_range.values();
  const std::vector<double> ks = space.K_range.values();
  const std::size_t n_k = ks.size();

  Optimum result;
  result.surface.resize(hs.size() * n_k);

  // All K points of one h share the level kernel, so work is sliced by h.
  const auto run_h = [&](std::size_t hi) {
    const double h = hs[hi];
    Matrix kernel;
    std::string kernel_error;
    try {
      kernel = discretize(shift, process.s, h, step, v_max);
    } catch (const std::exception& e) {
      kernel_error = e.what();
    }
    for (std::size_t ki = 0; ki < n_k; ++ki) {
      SurfacePoint& point = result.surface[hi * n_k + ki];
      point.h = h;
      point.K = ks[ki];
      if (!kernel_error.empty()) {
        point.error = kernel_error;
        continue;
      }
      try {
        const ChartModel model = build_model({h, ks[ki]}, process, shift, costs, step,
                                             v_max, &kernel);
        point.cost = expected_cost(model);
        point.ok = true;
      } catch (const std::exception& e) {
        point.error = e.what();
      }
    }
  };

  if (threads == 1 || hs.size() == 1) {
    for (std::size_t hi = 0; hi < hs.size(); ++hi) run_h(hi);
  } else {
    std::vector<std::thread> pool;
    const auto worker_count =
        std::min<std::size_t>(static_cast<std::size_t>(threads), hs.size());
    // static round-robin split; each slice writes its own indices, so the
    // assembled surface is identical to a serial sweep
    for (std::size_t w = 0; w < worker_count; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t hi = w; hi < hs.size(); hi += worker_count) run_h(hi);
      });
    }
    for (auto& t : pool) t.join();
  }

  bool found = false;
  double best = 0.0;
  ChartParams best_params;
  for (const SurfacePoint& point : result.surface) {  // h-major order: ties keep
    if (!point.ok) continue;                          // the smaller h, then smaller K
    if (!found || point.cost < best) {
      found = true;
      best = point.cost;
      best_params = {point.h, point.K};
    }
  }
  if (!found) throw ParameterError("grid_search: every grid point failed to evaluate");
  result.best_cost = best;
  result.best_params = best_params;
  return result;
}

}  // namespace ccopt
