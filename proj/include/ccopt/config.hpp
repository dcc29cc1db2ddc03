#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "ccopt/chart.hpp"
#include "ccopt/optimize.hpp"
#include "ccopt/shift_spec.hpp"

namespace ccopt {

// Numeric knobs shared by all subcommands. k_max == 0 means "choose the
// smallest Poisson truncation with upper tail below 1e-12".
struct NumericsConfig {
  double grid_step = 0.05;
  double grid_max = 20.0;
  std::int64_t k_max = 0;
  std::int64_t n_paths = 100000;
  std::int64_t n_intervals = 20000;
  int n_quad = 64;
  std::uint64_t seed = 12345;
  double rel_tol = 1e-8;
  double start_distance = 0.0;  // starting distance j for interval-cost reports
};

// Fully resolved run configuration. `chart_point` is present when the chart
// section holds scalar h/K, `chart_space` always holds the (possibly
// degenerate) search ranges.
struct RunConfig {
  ProcessSpec process;
  ShiftLaw shift;
  CostSpec costs;
  std::optional<ChartParams> chart_point;
  SearchSpace chart_space;
  NumericsConfig numerics;

  // The mixture law, or a ConfigError naming the command that needs it.
  const MixtureShiftSpec& mixture_or_throw(const char* what) const;
};

// Parses and validates a config document. Unknown keys are rejected; all
// errors carry the JSON path (and line/column for parse errors).
RunConfig parse_config(const nlohmann::json& doc);

// Loads from a file; parse errors report file:line:column.
RunConfig load_config(const std::string& path);

// The fully resolved config with every default made explicit; feeding the
// result back through parse_config reproduces the same run.
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace ccopt
