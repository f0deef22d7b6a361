#include "config.hpp"

#include <filesystem>
#include <set>

namespace charflow::cli {

namespace {

template <class T>
T get(const io::Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: bad value for \"") + key + "\": " + e.what());
  }
}

void reject_unknown(const io::Json& j, const std::set<std::string>& known, const char* where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError(std::string(where) + ": unknown key \"" + key + "\"");
  }
}

MeasureConfig measure_from_json(const io::Json& j) {
  if (!j.is_object()) throw ConfigError("config: \"measure\" must be an object");
  reject_unknown(j, {"kind", "lower", "upper", "count", "density", "negative_half", "file"},
                 "config.measure");
  MeasureConfig m;
  if (j.contains("kind")) m.kind = get<std::string>(j, "kind");
  if (j.contains("lower")) m.lower = get<std::vector<double>>(j, "lower");
  if (j.contains("upper")) m.upper = get<std::vector<double>>(j, "upper");
  if (j.contains("count")) m.count = get<std::size_t>(j, "count");
  if (j.contains("density")) m.density = get<double>(j, "density");
  if (j.contains("negative_half")) m.negative_half = get<bool>(j, "negative_half");
  if (j.contains("file")) m.file = get<std::string>(j, "file");
  return m;
}

template <class T>
void put_optional(io::Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

}  // namespace

ScenarioConfig config_from_json(const io::Json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(j,
                 {"scenario", "name", "field", "grid", "measure", "cells", "battery", "tol", "x0",
                  "alphabet", "substeps", "radius", "per_side", "variant", "samples", "out", "seed"},
                 "config");
  ScenarioConfig c;
  if (j.contains("scenario")) c.scenario = get<std::string>(j, "scenario");
  if (j.contains("name")) c.name = get<std::string>(j, "name");
  if (j.contains("field")) {
    try {
      const io::Json& f = j.at("field");
      c.field = f.is_string() ? io::parse_field_spec(f.get<std::string>()) : io::field_spec_from_json(f);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  if (j.contains("grid")) {
    const io::Json& g = j.at("grid");
    if (!g.is_object()) throw ConfigError("config: \"grid\" must be an object");
    reject_unknown(g, {"T", "N"}, "config.grid");
    if (g.contains("T")) c.horizon = get<double>(g, "T");
    if (g.contains("N")) c.steps = get<std::size_t>(g, "N");
  }
  if (j.contains("measure")) c.measure = measure_from_json(j.at("measure"));
  if (j.contains("cells")) {
    const io::Json& cells = j.at("cells");
    if (cells.is_number()) {
      c.cells = get<std::size_t>(j, "cells");
    } else {
      if (!cells.is_object()) throw ConfigError("config: \"cells\" must be a count or an object");
      reject_unknown(cells, {"count", "lower", "upper"}, "config.cells");
      if (cells.contains("count")) c.cells = get<std::size_t>(cells, "count");
      if (cells.contains("lower")) c.cell_lower = get<std::vector<double>>(cells, "lower");
      if (cells.contains("upper")) c.cell_upper = get<std::vector<double>>(cells, "upper");
    }
  }
  if (j.contains("battery")) c.battery = get<std::size_t>(j, "battery");
  if (j.contains("tol")) c.tol = get<double>(j, "tol");
  if (j.contains("x0")) c.x0 = get<double>(j, "x0");
  if (j.contains("alphabet")) c.alphabet = get<std::vector<double>>(j, "alphabet");
  if (j.contains("substeps")) c.substeps = get<std::size_t>(j, "substeps");
  if (j.contains("radius")) c.radius = get<double>(j, "radius");
  if (j.contains("per_side")) c.per_side = get<std::size_t>(j, "per_side");
  if (j.contains("variant")) c.variant = get<std::string>(j, "variant");
  if (j.contains("samples")) c.samples = get<std::size_t>(j, "samples");
  if (j.contains("out")) c.out = get<std::string>(j, "out");
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed");
  return c;
}

io::Json to_json(const ScenarioConfig& c) {
  io::Json j;
  j["scenario"] = c.scenario;
  if (!c.name.empty()) j["name"] = c.name;
  if (c.field) j["field"] = io::to_json(*c.field);
  io::Json grid = io::Json::object();
  put_optional(grid, "T", c.horizon);
  put_optional(grid, "N", c.steps);
  j["grid"] = grid;
  io::Json m;
  m["kind"] = c.measure.kind;
  put_optional(m, "lower", c.measure.lower);
  put_optional(m, "upper", c.measure.upper);
  put_optional(m, "count", c.measure.count);
  m["density"] = c.measure.density;
  m["negative_half"] = c.measure.negative_half;
  if (!c.measure.file.empty()) m["file"] = c.measure.file;
  j["measure"] = m;
  io::Json cells = io::Json::object();
  put_optional(cells, "count", c.cells);
  put_optional(cells, "lower", c.cell_lower);
  put_optional(cells, "upper", c.cell_upper);
  j["cells"] = cells;
  j["battery"] = c.battery;
  put_optional(j, "tol", c.tol);
  put_optional(j, "x0", c.x0);
  put_optional(j, "alphabet", c.alphabet);
  j["substeps"] = c.substeps;
  j["radius"] = c.radius;
  j["per_side"] = c.per_side;
  j["variant"] = c.variant;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  return j;
}

void validate(const ScenarioConfig& c) {
  static const std::set<std::string> scenarios{"transport", "superpose", "counterexample",
                                               "density", "gallery"};
  if (!scenarios.count(c.scenario)) throw ConfigError("unknown scenario \"" + c.scenario + "\"");
  if (c.scenario == "counterexample") {
    static const std::set<std::string> names{"sign_oracle", "fixed_sign_oracle",
                                             "fat_cantor_oracle", "dead_curve",
                                             "signed_stationary"};
    if (!names.count(c.name)) throw ConfigError("unknown counterexample \"" + c.name + "\"");
  }
  if (c.horizon && !(*c.horizon > 0.0)) throw ConfigError("grid.T must be positive");
  if (c.steps && *c.steps == 0) throw ConfigError("grid.N must be at least 1");
  if (c.tol && !(*c.tol > 0.0)) throw ConfigError("tol must be positive");
  if (c.cells && *c.cells == 0) throw ConfigError("cells must be at least 1");
  if (c.battery == 0) throw ConfigError("battery must be at least 1");
  if (c.substeps == 0) throw ConfigError("substeps must be at least 1");
  if (c.variant != "signed" && c.variant != "absolute") {
    throw ConfigError("variant must be \"signed\" or \"absolute\"");
  }
  const std::set<std::string> kinds{"uniform", "random", "file"};
  if (!kinds.count(c.measure.kind)) throw ConfigError("measure.kind must be uniform, random or file");
  if (c.measure.kind == "file" && !std::filesystem::exists(c.measure.file)) {
    throw ConfigError("measure file not found: " + c.measure.file);
  }
  if (c.measure.count && *c.measure.count == 0) throw ConfigError("measure.count must be positive");
  if (c.measure.lower.has_value() != c.measure.upper.has_value()) {
    throw ConfigError("measure.lower and measure.upper go together");
  }
  if (c.cell_lower.has_value() != c.cell_upper.has_value()) {
    throw ConfigError("cells.lower and cells.upper go together");
  }
}

}  // namespace charflow::cli
