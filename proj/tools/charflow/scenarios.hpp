#pragma once

#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace charflow::cli {

struct ScenarioOutput {
  io::Json report;
  bool pass = false;
  /// (file name, contents) written under config.out; report.json comes first.
  std::vector<std::pair<std::string, std::string>> files;
};

/// Runs the configured scenario without touching the filesystem (apart from
/// reading a measure file). Failed checks and scenario-level errors are
/// recorded in the report with pass = false; ConfigError propagates.
ScenarioOutput execute(const ScenarioConfig& config);

/// execute + write files. Returns the exit status: 0 all checks pass,
/// 1 a check failed, 2 configuration error.
int run(const ScenarioConfig& config, std::string* message = nullptr);

}  // namespace charflow::cli
