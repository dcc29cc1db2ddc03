// ccopt: cost-optimal control-chart design for compound-Poisson mixture
// shift processes. Subcommands: moments, simulate, chart, optimize.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "ccopt/chart.hpp"
#include "ccopt/config.hpp"
#include "ccopt/csv.hpp"
#include "ccopt/errors.hpp"
#include "ccopt/moments.hpp"
#include "ccopt/numerics.hpp"
#include "ccopt/optimize.hpp"
#include "ccopt/oracle.hpp"
#include "ccopt/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitTolerance = 3;
constexpr int kExitConvergence = 4;

struct CliOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed_override;
  int threads = 1;
  std::string format = "csv";
  bool emit_paths = false;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

// Full resolved configuration plus tool identity; re-running the manifest's
// config reproduces every output byte for byte.
void emit_manifest(const ccopt::RunConfig& config, const CliOptions& options,
                   const std::string& command) {
  json manifest;
  manifest["tool"] = {{"name", "ccopt"}, {"version", ccopt::kVersion}};
  manifest["command"] = command;
  manifest["format"] = options.format;
  manifest["threads"] = options.threads;
  manifest["seed"] = config.numerics.seed;
  manifest["config"] = ccopt::config_to_json(config);
  write_json(fs::path(options.out_dir) / "manifest.json", manifest);
}

ccopt::RunConfig load(const CliOptions& options) {
  ccopt::RunConfig config = ccopt::load_config(options.config_path);
  if (options.seed_override) config.numerics.seed = *options.seed_override;
  fs::create_directories(options.out_dir);
  return config;
}

std::int64_t resolve_k_max(const ccopt::RunConfig& config, double mean) {
  if (config.numerics.k_max > 0) return config.numerics.k_max;
  return ccopt::poisson_truncation_bound(mean, 1e-12) + 16;
}

ccopt::ChartParams require_point(const ccopt::RunConfig& config, const char* command) {
  if (!config.chart_point)
    throw ccopt::ConfigError(std::string(command) +
                             " requires scalar chart parameters (/chart/h and /chart/K)");
  return *config.chart_point;
}

double require_scalar_h(const ccopt::RunConfig& config, const char* command) {
  if (config.chart_space.h_range.count != 1)
    throw ccopt::ConfigError(std::string(command) +
                             " requires a scalar /chart/h, not a range");
  return config.chart_space.h_range.min;
}

int cmd_moments(const CliOptions& options) {
  const ccopt::RunConfig config = load(options);
  emit_manifest(config, options, "moments");

  ccopt::IntervalCostInput input;
  input.h = require_scalar_h(config, "moments");
  input.j = config.numerics.start_distance;
  input.s = config.process.s;
  input.shift = config.shift;

  const bool is_mixture = std::holds_alternative<ccopt::MixtureShiftSpec>(config.shift);
  const ccopt::IntervalCostResult closed =
      is_mixture ? ccopt::c2_mixture(input) : ccopt::c2_general(input);
  const std::int64_t k_max = resolve_k_max(config, input.s * input.h);
  const double oracle =
      ccopt::c2_series_oracle(input, k_max, config.numerics.n_quad, 1e-9);
  const double rel_diff =
      std::abs(closed.integral - oracle) / std::max(1e-300, std::abs(oracle));

  std::cout << "interval cost over h=" << ccopt::format_double(input.h)
            << " from j=" << ccopt::format_double(input.j) << "\n"
            << "  integral          " << ccopt::format_double(closed.integral) << "\n"
            << "  per_unit_time     " << ccopt::format_double(closed.per_unit_time) << "\n"
            << "  series_oracle     " << ccopt::format_double(oracle) << "\n"
            << "  relative_diff     " << ccopt::format_double(rel_diff) << "\n";

  json report;
  report["h"] = input.h;
  report["j"] = input.j;
  report["s"] = input.s;
  report["integral"] = closed.integral;
  report["per_unit_time"] = closed.per_unit_time;
  report["series_oracle"] = oracle;
  report["relative_diff"] = rel_diff;
  report["rel_tol"] = config.numerics.rel_tol;
  write_json(fs::path(options.out_dir) / "moments.json", report);
  if (options.format == "csv") {
    ccopt::CsvWriter csv((fs::path(options.out_dir) / "moments.csv").string());
    csv.write_row({"h", "j", "s", "integral", "per_unit_time", "series_oracle",
                   "relative_diff"});
    csv.write_row({ccopt::format_double(input.h), ccopt::format_double(input.j),
                   ccopt::format_double(input.s), ccopt::format_double(closed.integral),
                   ccopt::format_double(closed.per_unit_time),
                   ccopt::format_double(oracle), ccopt::format_double(rel_diff)});
  }

  if (rel_diff > config.numerics.rel_tol) {
    std::cerr << "moments: relative difference " << rel_diff << " exceeds tolerance "
              << config.numerics.rel_tol << "\n";
    return kExitTolerance;
  }
  return kExitOk;
}

int cmd_simulate(const CliOptions& options) {
  const ccopt::RunConfig config = load(options);
  emit_manifest(config, options, "simulate");
  const auto& spec = config.mixture_or_throw("simulate");

  const double h = require_scalar_h(config, "simulate");
  const double j = config.numerics.start_distance;
  const ccopt::McEstimate c2 =
      ccopt::estimate_c2(j, h, config.process.s, spec, config.numerics.n_paths,
                         config.numerics.seed, options.threads);

  ccopt::IntervalCostInput input;
  input.h = h;
  input.j = j;
  input.s = config.process.s;
  input.shift = spec;
  const double closed = ccopt::c2_mixture(input).integral;

  std::cout << "pathwise squared-deviation integral, " << c2.n_paths << " paths\n"
            << "  estimate    " << ccopt::format_double(c2.mean) << "\n"
            << "  std_error   " << ccopt::format_double(c2.std_error) << "\n"
            << "  closed_form " << ccopt::format_double(closed) << "\n";

  json report;
  report["h"] = h;
  report["j"] = j;
  report["s"] = config.process.s;
  report["n_paths"] = c2.n_paths;
  report["seed"] = c2.seed;
  report["estimate"] = c2.mean;
  report["std_error"] = c2.std_error;
  report["closed_form"] = closed;

  if (config.chart_point) {
    const ccopt::McEstimate chart = ccopt::simulate_chart(
        *config.chart_point, config.process, spec, config.costs,
        config.numerics.n_intervals, config.numerics.seed);
    report["chart_cost"] = {{"estimate", chart.mean},
                            {"std_error", chart.std_error},
                            {"n_blocks", chart.n_paths},
                            {"n_intervals", config.numerics.n_intervals}};
    std::cout << "chart cost per unit time, " << config.numerics.n_intervals
              << " intervals\n"
              << "  estimate    " << ccopt::format_double(chart.mean) << "\n"
              << "  std_error   " << ccopt::format_double(chart.std_error) << "\n";
  }
  write_json(fs::path(options.out_dir) / "simulate.json", report);

  if (options.emit_paths) {
    ccopt::CsvWriter csv((fs::path(options.out_dir) / "paths.csv").string());
    csv.write_row({"path", "square_integral"});
    for (std::int64_t p = 0; p < config.numerics.n_paths; ++p) {
      ccopt::RngStream rng(ccopt::substream_seed(config.numerics.seed,
                                                 static_cast<std::uint64_t>(p)));
      const double value = ccopt::pathwise_square_integral(
          ccopt::simulate_trajectory(j, h, config.process.s, spec, rng));
      csv.write_row({std::to_string(p), ccopt::format_double(value)});
    }
  }
  return kExitOk;
}

int cmd_chart(const CliOptions& options) {
  const ccopt::RunConfig config = load(options);
  emit_manifest(config, options, "chart");
  const auto& spec = config.mixture_or_throw("chart");
  const ccopt::ChartParams params = require_point(config, "chart");

  const ccopt::ChartModel model =
      ccopt::build_model(params, config.process, spec, config.costs,
                         config.numerics.grid_step, config.numerics.grid_max);
  const double cost = ccopt::expected_cost(model);

  std::cout << "expected cost per unit time  " << ccopt::format_double(cost) << "\n"
            << "stationary residual          "
            << ccopt::format_double(model.stationary_residual) << "\n"
            << "states                       " << model.stationary.size() << "\n";

  const auto table_path = fs::path(options.out_dir) / "chart_states.csv";
  if (options.format == "json") {
    json states = json::array();
    for (std::size_t i = 0; i < model.level_count(); ++i)
      for (int a = 0; a < 2; ++a) {
        const std::size_t idx = ccopt::ChartModel::state_index(i, a == 1);
        states.push_back({{"level", model.grid_levels[i]},
                          {"alarm", a == 1},
                          {"stationary", model.stationary[idx]},
                          {"cost_per_unit_time", model.cost_vector[idx]}});
      }
    write_json(fs::path(options.out_dir) / "chart_states.json", states);
  } else {
    ccopt::CsvWriter csv(table_path.string());
    csv.write_row({"level", "alarm", "stationary", "cost_per_unit_time"});
    for (std::size_t i = 0; i < model.level_count(); ++i)
      for (int a = 0; a < 2; ++a) {
        const std::size_t idx = ccopt::ChartModel::state_index(i, a == 1);
        csv.write_row({ccopt::format_double(model.grid_levels[i]),
                       a == 1 ? "1" : "0",
                       ccopt::format_double(model.stationary[idx]),
                       ccopt::format_double(model.cost_vector[idx])});
      }
  }

  json summary;
  summary["h"] = params.h;
  summary["K"] = params.K;
  summary["expected_cost"] = cost;
  summary["stationary_residual"] = model.stationary_residual;
  summary["levels"] = model.level_count();
  summary["grid_step"] = model.grid_step;
  write_json(fs::path(options.out_dir) / "chart.json", summary);
  return kExitOk;
}

int cmd_optimize(const CliOptions& options) {
  const ccopt::RunConfig config = load(options);
  emit_manifest(config, options, "optimize");
  const auto& spec = config.mixture_or_throw("optimize");

  const ccopt::Optimum optimum =
      ccopt::grid_search(config.chart_space, config.process, spec, config.costs,
                         config.numerics.grid_step, config.numerics.grid_max,
                         options.threads);

  std::cout << "best h     " << ccopt::format_double(optimum.best_params.h) << "\n"
            << "best K     " << ccopt::format_double(optimum.best_params.K) << "\n"
            << "best cost  " << ccopt::format_double(optimum.best_cost) << "\n"
            << "points     " << optimum.surface.size() << "\n";

  if (options.format == "json") {
    json surface = json::array();
    for (const auto& point : optimum.surface) {
      json row = {{"h", point.h}, {"K", point.K}, {"ok", point.ok}};
      if (point.ok)
        row["cost"] = point.cost;
      else
        row["error"] = point.error;
      surface.push_back(row);
    }
    write_json(fs::path(options.out_dir) / "surface.json", surface);
  } else {
    ccopt::CsvWriter csv((fs::path(options.out_dir) / "surface.csv").string());
    csv.write_row({"h", "K", "expected_cost", "ok", "error"});
    for (const auto& point : optimum.surface)
      csv.write_row({ccopt::format_double(point.h), ccopt::format_double(point.K),
                     point.ok ? ccopt::format_double(point.cost) : "",
                     point.ok ? "1" : "0", point.error});
  }

  json best;
  best["h"] = optimum.best_params.h;
  best["K"] = optimum.best_params.K;
  best["expected_cost"] = optimum.best_cost;
  best["evaluated_points"] = optimum.surface.size();
  std::size_t failed = 0;
  for (const auto& point : optimum.surface)
    if (!point.ok) ++failed;
  best["failed_points"] = failed;
  write_json(fs::path(options.out_dir) / "optimum.json", best);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-optimal control charts for compound-Poisson mixture shifts"};
  app.require_subcommand(1);

  CliOptions options;
  app.add_option("--out", options.out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", options.seed_override, "Override the config seed");
  app.add_option("--threads", options.threads, "Worker thread cap")
      ->check(CLI::Range(1, 256))
      ->capture_default_str();
  app.add_option("--format", options.format, "Tabular output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  CLI::App* moments = app.add_subcommand(
      "moments", "Closed-form interval cost, cross-checked by the series oracle");
  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo estimates with standard errors");
  simulate->add_flag("--emit-paths", options.emit_paths,
                     "Write per-path squared-deviation integrals to paths.csv");
  CLI::App* chart = app.add_subcommand(
      "chart", "Markov chart model: stationary distribution, costs, E(C)");
  CLI::App* optimize =
      app.add_subcommand("optimize", "Grid search for cost-optimal (h, K)");
  for (CLI::App* sub : {moments, simulate, chart, optimize}) {
    sub->add_option("--config", options.config_path, "Path to the JSON run config")
        ->required();
    sub->fallthrough();  // let the shared flags above match after the subcommand
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (moments->parsed()) return cmd_moments(options);
    if (simulate->parsed()) return cmd_simulate(options);
    if (chart->parsed()) return cmd_chart(options);
    if (optimize->parsed()) return cmd_optimize(options);
  } catch (const ccopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ccopt::ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ccopt::GridError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ccopt::ToleranceError& e) {
    std::cerr << "tolerance failure: " << e.what() << "\n";
    return kExitTolerance;
  } catch (const ccopt::TruncationError& e) {
    std::cerr << "tolerance failure: " << e.what() << "\n";
    return kExitTolerance;
  } catch (const ccopt::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
