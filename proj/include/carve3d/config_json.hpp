#pragma once

#include <json.hpp>

#include "carve3d/baselines.hpp"
#include "carve3d/carve.hpp"

namespace carve3d {

nlohmann::json to_json(const AugmentConfig& config);
AugmentConfig augment_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const StepLog& step);
nlohmann::json to_json(const WarpSpec& spec);

}  // namespace carve3d
