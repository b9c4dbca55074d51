#pragma once

/**
 * @file repro.hpp
 * @brief Named reproduction recipes. Each recipe runs one acceptance check
 * end to end and reports pass/fail with the measured numbers.
 */

#include <string>
#include <vector>

#include <json.hpp>

namespace latslice {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string summary;
  nlohmann::json detail;
  double seconds = 0.0;
};

/// Recipe names in criterion order, followed by "ff" and "all".
[[nodiscard]] std::vector<std::string> repro_names();

/// Runs a recipe. "ff" reads params["p"] (default 13); "all" runs recipes
/// 1 to 10. params["seed"] offsets every seeded battery.
[[nodiscard]] std::vector<CriterionResult> run_repro(const std::string& name, const nlohmann::json& params = {});

}  // namespace latslice
