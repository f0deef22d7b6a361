#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "charflow/field.hpp"
#include "charflow/io.hpp"

namespace charflow::cli {

/// Malformed or inconsistent configuration (exit status 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeasureConfig {
  std::string kind = "uniform";  // uniform | random | file
  std::optional<std::vector<double>> lower;
  std::optional<std::vector<double>> upper;
  std::optional<std::size_t> count;  // per axis (uniform) or total (random)
  double density = 1.0;
  bool negative_half = false;  // uniform only: negate weights with x_0 < 0
  std::string file;
};

struct ScenarioConfig {
  std::string scenario;  // transport | superpose | counterexample | density | gallery
  std::string name;      // counterexample name
  std::optional<FieldSpec> field;
  std::optional<double> horizon;
  std::optional<std::size_t> steps;
  MeasureConfig measure;
  std::optional<std::size_t> cells;
  std::optional<std::vector<double>> cell_lower;
  std::optional<std::vector<double>> cell_upper;
  std::size_t battery = 5;  // bump centres per axis
  std::optional<double> tol;
  std::optional<double> x0;
  std::optional<std::vector<double>> alphabet;
  std::size_t substeps = 16;
  double radius = 2.0;       // signed_stationary truncation R
  std::size_t per_side = 2000;
  std::string variant = "signed";
  std::size_t samples = 10000;  // gallery bound check
  std::string out = "charflow-out";
  std::uint64_t seed = 0;
};

ScenarioConfig config_from_json(const io::Json& j);
/// Resolved form embedded in every report.
io::Json to_json(const ScenarioConfig& config);
/// Throws ConfigError for values no scenario accepts.
void validate(const ScenarioConfig& config);

}  // namespace charflow::cli
