#pragma once

#include <json.hpp>

#include "wpmm/solver/wpmm.hpp"

namespace wpmm::solver {

nlohmann::json to_json(const SolverConfig& config);
nlohmann::json to_json(const StepConstants& constants);
// Config echo, constants, per-iteration records and final points.
nlohmann::json to_json(const RunLog& log, bool include_points = false);

}  // namespace wpmm::solver
