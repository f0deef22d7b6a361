#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "charflow/continuity.hpp"
#include "charflow/curve.hpp"
#include "charflow/field.hpp"
#include "charflow/measure.hpp"
#include "charflow/superposition.hpp"

namespace charflow::io {

// Insertion-ordered so that dumps are byte-stable.
using Json = nlohmann::ordered_json;

// Doubles are written in shortest round-trip form, so parse(dump(x)) == x
// bitwise. Every *_from_json throws std::invalid_argument on malformed input.

Json to_json(const FieldSpec& spec);  // {"id": ..., "params": {...}}
FieldSpec field_spec_from_json(const Json& j);
/// Accepts either a bare identifier ("sign") or a JSON object.
FieldSpec parse_field_spec(const std::string& text);

Json to_json(const TimeGrid& grid);  // {"T": ..., "N": ...}
TimeGrid time_grid_from_json(const Json& j);

Json to_json(const Curve& curve);  // {"T", "N", "samples": [[...], ...]}
Curve curve_from_json(const Json& j);

Json to_json(const ParticleMeasure& mu);  // {"points": [[...]], "weights": [...]}
ParticleMeasure particle_measure_from_json(const Json& j);

Json to_json(const CurveMeasure& eta);  // {"grid", "curves": [[[...]...]], "weights"}
CurveMeasure curve_measure_from_json(const Json& j);

Json to_json(const FlowTable& table);  // {"cells", "curves", "masses"}

Json to_json(const TestFunction& phi);
/// {"max_residual", "worst_phi", "worst_time_index", "tol", "pass"}.
Json to_json(const VerificationReport& report, std::span<const TestFunction> battery);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace charflow::io
