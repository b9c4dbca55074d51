#pragma once

/**
 * @file report.hpp
 * @brief Run configurations, command dispatch and report emission.
 *
 * A RunConfig names a command and carries its parameters as a JSON object,
 * so the same record drives the CLI, the Python bindings and the tests.
 * run() computes a Report without touching the filesystem beyond reading
 * inputs; write_outputs() then writes every file atomically.
 */

#include <cstdint>
#include <filesystem>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "latslice/dimension.hpp"
#include "latslice/survey.hpp"

namespace latslice {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitAssertion = 3;
inline constexpr int kExitIo = 4;

enum class Command { generate, validate, dim, slice, survey, ff, levels, repro };

[[nodiscard]] Command parse_command(const std::string& name);
[[nodiscard]] std::string to_string(Command command);

struct RunConfig {
  Command command = Command::validate;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::filesystem::path out;      // primary output (points, CSV or report JSON)
  std::filesystem::path report;   // optional JSON report for generate / dim / slice
  std::filesystem::path sidecar;  // optional CSV (survey cells)
};

struct Report {
  Command command = Command::validate;
  nlohmann::json config;
  nlohmann::json results;
  nlohmann::json provenance;
  /// False when a verification the command performs did not hold.
  bool assertions_passed = true;
  /// Files to write next to the report: path and contents.
  std::vector<std::pair<std::filesystem::path, std::string>> files;
};

/// Throws ConfigError for bad parameters and IoError for unreadable inputs.
[[nodiscard]] Report run(const RunConfig& config);

/// Full JSON document: command, config, results, provenance.
[[nodiscard]] nlohmann::json to_json(const Report& report);

/// Writes report.files atomically; throws IoError.
void write_outputs(const Report& report);

/// Exit code for the exception currently being handled.
[[nodiscard]] int exit_code_for_current_exception();

[[nodiscard]] std::string format_profile_csv(const DimensionProfile& profile);
void emit_profile_csv(const DimensionProfile& profile, const std::filesystem::path& path);
/// Reads back scale,count,ratio rows.
[[nodiscard]] std::vector<std::tuple<double, std::uint64_t, double>> parse_profile_csv(const std::string& text);

[[nodiscard]] nlohmann::json to_json(const DimensionProfile& profile);
[[nodiscard]] nlohmann::json to_json(const SurveyReport& report);
[[nodiscard]] nlohmann::json to_json(const LevelProfile& profile);

}  // namespace latslice
