#include "charflow/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace charflow::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

const Json& member(const Json& j, const char* key, const char* owner) {
  if (!j.is_object()) fail(std::string(owner) + ": object expected");
  auto it = j.find(key);
  if (it == j.end()) fail(std::string(owner) + ": missing \"" + key + "\"");
  return *it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) fail(std::string(what) + ": number expected");
  return j.get<double>();
}

std::size_t count(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    fail(std::string(what) + ": nonnegative integer expected");
  }
  return j.get<std::size_t>();
}

std::vector<double> number_list(const Json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + ": array expected");
  std::vector<double> out;
  out.reserve(j.size());
  for (const Json& v : j) out.push_back(number(v, what));
  return out;
}

// [[x, y], ...] -> flat row-major buffer; dim is taken from the first row.
std::vector<double> point_rows(const Json& j, std::size_t& dim, const char* what) {
  if (!j.is_array()) fail(std::string(what) + ": array of points expected");
  std::vector<double> flat;
  for (const Json& row : j) {
    std::vector<double> p = number_list(row, what);
    if (dim == 0) dim = p.size();
    if (p.size() != dim || dim == 0) fail(std::string(what) + ": inconsistent point dimension");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  return flat;
}

Json rows(std::span<const double> flat, std::size_t dim) {
  Json out = Json::array();
  for (std::size_t k = 0; k + dim <= flat.size(); k += dim) {
    out.push_back(Json(std::vector<double>(flat.begin() + k, flat.begin() + k + dim)));
  }
  return out;
}

}  // namespace

Json to_json(const FieldSpec& spec) {
  Json params = Json::object();
  switch (spec.kind) {
    case FieldKind::kConstant:
      params["velocity"] = spec.velocity;
      break;
    case FieldKind::kClampedRotation:
      params["radius"] = spec.radius;
      break;
    case FieldKind::kFatCantor:
      params["level"] = spec.level;
      break;
    default:
      break;
  }
  return Json{{"id", std::string(field_id(spec.kind))}, {"params", params}};
}

FieldSpec field_spec_from_json(const Json& j) {
  const Json& id = member(j, "id", "field");
  if (!id.is_string()) fail("field: \"id\" must be a string");
  FieldSpec spec = default_spec(field_kind_from_id(id.get<std::string>()));
  auto it = j.find("params");
  if (it == j.end()) return spec;
  if (!it->is_object()) fail("field: \"params\" must be an object");
  for (const auto& [key, value] : it->items()) {
    if (key == "velocity" && spec.kind == FieldKind::kConstant) {
      spec.velocity = number_list(value, "field.params.velocity");
    } else if (key == "radius" && spec.kind == FieldKind::kClampedRotation) {
      spec.radius = number(value, "field.params.radius");
    } else if (key == "level" && spec.kind == FieldKind::kFatCantor) {
      if (!value.is_number_integer()) fail("field.params.level: integer expected");
      spec.level = value.get<int>();
    } else {
      fail("field: unknown parameter \"" + key + "\" for " + std::string(field_id(spec.kind)));
    }
  }
  return spec;
}

FieldSpec parse_field_spec(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      fail(std::string("field: ") + e.what());
    }
    return field_spec_from_json(j);
  }
  return default_spec(field_kind_from_id(text));
}

Json to_json(const TimeGrid& grid) { return Json{{"T", grid.horizon()}, {"N", grid.steps()}}; }

TimeGrid time_grid_from_json(const Json& j) {
  return TimeGrid(number(member(j, "T", "grid"), "grid.T"), count(member(j, "N", "grid"), "grid.N"));
}

Json to_json(const Curve& curve) {
  return Json{{"T", curve.grid().horizon()},
              {"N", curve.grid().steps()},
              {"samples", rows(curve.samples(), curve.dimension())}};
}

Curve curve_from_json(const Json& j) {
  const TimeGrid grid = time_grid_from_json(j);
  std::size_t dim = 0;
  std::vector<double> samples = point_rows(member(j, "samples", "curve"), dim, "curve.samples");
  return Curve(grid, dim, std::move(samples));
}

Json to_json(const ParticleMeasure& mu) {
  return Json{{"points", rows(mu.points(), mu.dimension())},
              {"weights", std::vector<double>(mu.weights().begin(), mu.weights().end())}};
}

ParticleMeasure particle_measure_from_json(const Json& j) {
  std::size_t dim = 0;
  std::vector<double> points = point_rows(member(j, "points", "measure"), dim, "measure.points");
  std::vector<double> weights = number_list(member(j, "weights", "measure"), "measure.weights");
  if (dim == 0) dim = 1;
  return ParticleMeasure(dim, std::move(points), std::move(weights));
}

Json to_json(const CurveMeasure& eta) {
  Json curves = Json::array();
  for (const Curve& c : eta.curves()) curves.push_back(rows(c.samples(), c.dimension()));
  return Json{{"grid", to_json(eta.grid())},
              {"curves", curves},
              {"weights", std::vector<double>(eta.weights().begin(), eta.weights().end())}};
}

CurveMeasure curve_measure_from_json(const Json& j) {
  const TimeGrid grid = time_grid_from_json(member(j, "grid", "curve measure"));
  const Json& list = member(j, "curves", "curve measure");
  if (!list.is_array()) fail("curve measure: \"curves\" must be an array");
  std::size_t dim = 0;
  std::vector<Curve> curves;
  for (const Json& c : list) {
    std::vector<double> samples = point_rows(c, dim, "curve measure.curves");
    curves.emplace_back(grid, dim, std::move(samples));
  }
  std::vector<double> weights = number_list(member(j, "weights", "curve measure"),
                                            "curve measure.weights");
  return CurveMeasure(grid, dim == 0 ? 1 : dim, std::move(curves), std::move(weights));
}

Json to_json(const FlowTable& table) {
  Json curves = Json::array();
  for (const Curve& c : table.curves) curves.push_back(rows(c.samples(), c.dimension()));
  return Json{{"cells", table.cells}, {"curves", curves}, {"masses", table.masses}};
}

Json to_json(const TestFunction& phi) {
  return Json{{"center", std::vector<double>(phi.center().begin(), phi.center().end())},
              {"radius", phi.radius()},
              {"profile", phi.profile() == TimeProfile::kConstant ? "constant" : "cosine"}};
}

Json to_json(const VerificationReport& report, std::span<const TestFunction> battery) {
  Json worst = nullptr;
  if (report.worst_phi < battery.size()) worst = to_json(battery[report.worst_phi]);
  return Json{{"max_residual", report.max_residual},
              {"worst_phi", worst},
              {"worst_time_index", report.worst_time_index},
              {"tol", report.tol},
              {"pass", report.pass}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace charflow::io
