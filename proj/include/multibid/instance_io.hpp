#pragma once

#include "multibid/model.hpp"

#include <json.hpp>

#include <filesystem>

namespace multibid {

/// Instance file format:
///
///   {"m": int, "budget": float, "horizon": int, "p0": float?, "v0": float?,
///    "platforms": [{"price": dist, "value": dist}, ...]}
///
/// where dist is one of
///   {"type": "discrete", "support": [...], "probs": [...]}
///   {"type": "uniform", "lo": f, "hi": f}
///   {"type": "beta", "alpha": f, "beta": f}
///   {"type": "point", "value": f}
///
/// Unknown keys are rejected. The result is not validated; callers pass it
/// through validate_instance.
Instance instance_from_json(const nlohmann::json& doc);
nlohmann::json instance_to_json(const Instance& instance);

Distribution distribution_from_json(const nlohmann::json& doc, const std::string& where);
nlohmann::json distribution_to_json(const Distribution& dist);

/// Reads and validates.
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& instance, const std::filesystem::path& path);

} // namespace multibid
