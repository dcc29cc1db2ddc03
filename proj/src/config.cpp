#include "ccopt/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ccopt/errors.hpp"

namespace ccopt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void require_object(const json& node, const std::string& path) {
  if (!node.is_object()) fail(path, "expected an object");
}

void reject_unknown_keys(const json& node, const std::string& path,
                         const std::set<std::string>& allowed) {
  for (const auto& item : node.items())
    if (allowed.find(item.key()) == allowed.end())
      fail(path + "/" + item.key(), "unknown key");
}

double get_number(const json& node, const std::string& path, const char* key,
                  bool required, double fallback) {
  if (!node.contains(key)) {
    if (required) fail(path + "/" + key, "missing required number");
    return fallback;
  }
  const json& v = node.at(key);
  if (!v.is_number()) fail(path + "/" + key, "expected a number");
  return v.get<double>();
}

std::int64_t get_integer(const json& node, const std::string& path, const char* key,
                         std::int64_t fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_number_integer()) fail(path + "/" + key, "expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t get_u64(const json& node, const std::string& path, const char* key,
                      std::uint64_t fallback) {
  if (!node.contains(key)) return fallback;
  const json& v = node.at(key);
  if (!v.is_number_unsigned() && !v.is_number_integer())
    fail(path + "/" + key, "expected a nonnegative integer");
  if (v.is_number_integer() && v.get<std::int64_t>() < 0)
    fail(path + "/" + key, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

ProcessSpec parse_process(const json& node) {
  const std::string path = "/process";
  require_object(node, path);
  reject_unknown_keys(node, path, {"mu0", "sigma", "s", "repair_residual"});
  ProcessSpec spec;
  spec.mu0 = get_number(node, path, "mu0", false, 0.0);
  spec.sigma = get_number(node, path, "sigma", true, 1.0);
  spec.s = get_number(node, path, "s", true, 0.1);
  spec.repair_residual = get_number(node, path, "repair_residual", false, 0.0);
  try {
    spec.validate();
  } catch (const ParameterError& e) {
    fail(path, e.what());
  }
  return spec;
}

ShiftLaw parse_shift(const json& node) {
  const std::string path = "/shift";
  require_object(node, path);
  if (!node.contains("type")) fail(path + "/type", "missing required string");
  if (!node.at("type").is_string()) fail(path + "/type", "expected a string");
  const std::string type = node.at("type").get<std::string>();
  if (type == "mixture") {
    reject_unknown_keys(node, path, {"type", "zeta", "xi", "delta", "jump_scale"});
    MixtureShiftSpec spec;
    spec.zeta = get_number(node, path, "zeta", false, 0.0);
    spec.xi = get_number(node, path, "xi", false, 1.0);
    spec.delta = get_number(node, path, "delta", true, 1.0);
    spec.jump_scale = get_number(node, path, "jump_scale", false, 1.0);
    try {
      spec.validate();
    } catch (const ParameterError& e) {
      fail(path, e.what());
    }
    return spec;
  }
  if (type == "generic") {
    reject_unknown_keys(node, path, {"type", "m_x", "v_x", "m_y", "v_y", "zeta"});
    GenericComponentMoments gm;
    gm.m_x = get_number(node, path, "m_x", true, 0.0);
    gm.v_x = get_number(node, path, "v_x", true, 0.0);
    gm.m_y = get_number(node, path, "m_y", false, 0.0);
    gm.v_y = get_number(node, path, "v_y", false, 0.0);
    gm.zeta = get_number(node, path, "zeta", false, 0.0);
    try {
      gm.validate();
    } catch (const ParameterError& e) {
      fail(path, e.what());
    }
    return gm;
  }
  fail(path + "/type", "expected \"mixture\" or \"generic\"");
}

CostSpec parse_costs(const json& node) {
  const std::string path = "/costs";
  require_object(node, path);
  reject_unknown_keys(node, path, {"c_s", "c_f", "c_rb", "c_rs", "c_os", "c_ob"});
  CostSpec costs;
  costs.c_s = get_number(node, path, "c_s", false, 1.0);
  costs.c_f = get_number(node, path, "c_f", false, 0.0);
  costs.c_rb = get_number(node, path, "c_rb", false, 0.0);
  costs.c_rs = get_number(node, path, "c_rs", false, 0.0);
  costs.c_os = get_number(node, path, "c_os", false, 0.0);
  costs.c_ob = get_number(node, path, "c_ob", false, 0.0);
  try {
    costs.validate();
  } catch (const ParameterError& e) {
    fail(path, e.what());
  }
  return costs;
}

RangeSpec parse_range(const json& node, const std::string& path) {
  RangeSpec range;
  if (node.is_number()) {
    range.min = range.max = node.get<double>();
    range.count = 1;
    return range;
  }
  require_object(node, path);
  reject_unknown_keys(node, path, {"min", "max", "count"});
  range.min = get_number(node, path, "min", true, 0.0);
  range.max = get_number(node, path, "max", true, 0.0);
  const std::int64_t count = get_integer(node, path, "count", 2);
  if (count < 1 || count > 100000) fail(path + "/count", "expected an integer in [1, 100000]");
  range.count = static_cast<int>(count);
  if (range.count == 1 && range.min != range.max)
    fail(path, "count 1 requires min == max");
  return range;
}

NumericsConfig parse_numerics(const json& node) {
  const std::string path = "/numerics";
  NumericsConfig numerics;
  if (node.is_null()) return numerics;
  require_object(node, path);
  reject_unknown_keys(node, path,
                      {"grid_step", "grid_max", "k_max", "n_paths", "n_intervals",
                       "n_quad", "seed", "rel_tol", "start_distance"});
  numerics.grid_step = get_number(node, path, "grid_step", false, numerics.grid_step);
  numerics.grid_max = get_number(node, path, "grid_max", false, numerics.grid_max);
  numerics.k_max = get_integer(node, path, "k_max", numerics.k_max);
  numerics.n_paths = get_integer(node, path, "n_paths", numerics.n_paths);
  numerics.n_intervals = get_integer(node, path, "n_intervals", numerics.n_intervals);
  const std::int64_t n_quad = get_integer(node, path, "n_quad", numerics.n_quad);
  numerics.seed = get_u64(node, path, "seed", numerics.seed);
  numerics.rel_tol = get_number(node, path, "rel_tol", false, numerics.rel_tol);
  numerics.start_distance =
      get_number(node, path, "start_distance", false, numerics.start_distance);

  if (!(numerics.grid_step > 0.0)) fail(path + "/grid_step", "must be > 0");
  if (!(numerics.grid_max > 0.0)) fail(path + "/grid_max", "must be > 0");
  if (numerics.k_max < 0) fail(path + "/k_max", "must be >= 0 (0 = automatic)");
  if (numerics.n_paths < 1000) fail(path + "/n_paths", "must be >= 1000");
  if (numerics.n_intervals < 10000) fail(path + "/n_intervals", "must be >= 10000");
  if (n_quad < 1 || n_quad > 100000) fail(path + "/n_quad", "expected in [1, 100000]");
  numerics.n_quad = static_cast<int>(n_quad);
  if (!(numerics.rel_tol > 0.0)) fail(path + "/rel_tol", "must be > 0");
  if (!(numerics.start_distance >= 0.0)) fail(path + "/start_distance", "must be >= 0");
  return numerics;
}

}  // namespace

const MixtureShiftSpec& RunConfig::mixture_or_throw(const char* what) const {
  const auto* spec = std::get_if<MixtureShiftSpec>(&shift);
  if (spec == nullptr)
    throw ConfigError(std::string(what) +
                      " requires a mixture shift law (\"shift\": {\"type\": \"mixture\", ...})");
  return *spec;
}

RunConfig parse_config(const json& doc) {
  require_object(doc, "");
  reject_unknown_keys(doc, "", {"process", "shift", "costs", "chart", "numerics"});
  for (const char* key : {"process", "shift", "costs", "chart"})
    if (!doc.contains(key)) fail(std::string("/") + key, "missing required section");

  RunConfig config;
  config.process = parse_process(doc.at("process"));
  config.shift = parse_shift(doc.at("shift"));
  config.costs = parse_costs(doc.at("costs"));
  config.numerics = parse_numerics(doc.contains("numerics") ? doc.at("numerics") : json());

  const json& chart = doc.at("chart");
  require_object(chart, "/chart");
  reject_unknown_keys(chart, "/chart", {"h", "K"});
  if (!chart.contains("h")) fail("/chart/h", "missing required number or range");
  if (!chart.contains("K")) fail("/chart/K", "missing required number or range");
  config.chart_space.h_range = parse_range(chart.at("h"), "/chart/h");
  config.chart_space.K_range = parse_range(chart.at("K"), "/chart/K");
  try {
    config.chart_space.validate();
  } catch (const ParameterError& e) {
    fail("/chart", e.what());
  }
  if (config.chart_space.h_range.count == 1 && config.chart_space.K_range.count == 1) {
    ChartParams params{config.chart_space.h_range.min, config.chart_space.K_range.min};
    try {
      params.validate();
    } catch (const ParameterError& e) {
      fail("/chart", e.what());
    }
    config.chart_point = params;
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // convert the byte offset into line:column
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(column) +
                      ": " + e.what());
  }
  try {
    return parse_config(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

nlohmann::json config_to_json(const RunConfig& config) {
  json doc;
  doc["process"] = {{"mu0", config.process.mu0},
                    {"sigma", config.process.sigma},
                    {"s", config.process.s},
                    {"repair_residual", config.process.repair_residual}};
  if (const auto* spec = std::get_if<MixtureShiftSpec>(&config.shift)) {
    doc["shift"] = {{"type", "mixture"},
                    {"zeta", spec->zeta},
                    {"xi", spec->xi},
                    {"delta", spec->delta},
                    {"jump_scale", spec->jump_scale}};
  } else {
    const auto& gm = std::get<GenericComponentMoments>(config.shift);
    doc["shift"] = {{"type", "generic"}, {"m_x", gm.m_x}, {"v_x", gm.v_x},
                    {"m_y", gm.m_y},     {"v_y", gm.v_y}, {"zeta", gm.zeta}};
  }
  doc["costs"] = {{"c_s", config.costs.c_s},   {"c_f", config.costs.c_f},
                  {"c_rb", config.costs.c_rb}, {"c_rs", config.costs.c_rs},
                  {"c_os", config.costs.c_os}, {"c_ob", config.costs.c_ob}};
  const auto range_json = [](const RangeSpec& range) -> json {
    if (range.count == 1) return range.min;
    return {{"min", range.min}, {"max", range.max}, {"count", range.count}};
  };
  doc["chart"] = {{"h", range_json(config.chart_space.h_range)},
                  {"K", range_json(config.chart_space.K_range)}};
  doc["numerics"] = {{"grid_step", config.numerics.grid_step},
                     {"grid_max", config.numerics.grid_max},
                     {"k_max", config.numerics.k_max},
                     {"n_paths", config.numerics.n_paths},
                     {"n_intervals", config.numerics.n_intervals},
                     {"n_quad", config.numerics.n_quad},
                     {"seed", config.numerics.seed},
                     {"rel_tol", config.numerics.rel_tol},
                     {"start_distance", config.numerics.start_distance}};
  return doc;
}

}  // namespace ccopt
