#ifndef HUEMODEL_CONFIG_HPP
#define HUEMODEL_CONFIG_HPP

// JSON model configuration. Every key is optional; absent keys keep the
// defaults from ModelConfig::defaults().
//
//   {
//     "rectifiers": { "LGN": {"slope":1, "base":0, "lower":-1, "saturation":1}, "V1": {...}, ... },
//     "kernels":    { "LGN": {"size":19, "sigma":3.1667}, "V1": {...}, "V2": {...}, "V4": {...} },
//     "lgn_weights": { "L+M-": {"L":1, "M":-1, "S":0, "sigma_L":3.2, "sigma_M":3.2, "sigma_S":3.2,
//                               "gain":6.3}, ... },
//     "v4_weights":  { "red": {"hue":0, "weights":[0.85636, 0.00028984, 0.041238, 0.10211]}, ... }
//   }
//
// Per-cone sigmas default to the LGN kernel sigma; gains default to the
// gamut-normalising value for the configured cone weights.

#include "huemodel/model.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace huemodel {

ModelConfig model_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModelConfig& config);

/// Throws InputError naming the path when the file is unreadable or malformed.
ModelConfig load_model_config(const std::filesystem::path& path);

} // namespace huemodel

#endif
