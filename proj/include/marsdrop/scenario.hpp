#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "marsdrop/sim.hpp"

namespace marsdrop::scenario {

using Json = nlohmann::json;

/**
 * Built-in scenario documents.
 *
 * `mad`: release at 6000 m MOLA, 30 m/s, alpha 90 deg, no EDL phases.
 * `mad_full`: MAD entry, chute, spin-up and release.
 * `pathfinder`, `insight`: entry and chute of those missions, no release.
 */
[[nodiscard]] Json preset_document(std::string_view name);
[[nodiscard]] std::vector<std::string> preset_names();

/// Parses a JSON scenario file. IoError when unreadable, ConfigError when malformed.
[[nodiscard]] Json load_document(const std::filesystem::path& path);

/**
 * Applies `key=value` with a dotted key. The value is read as JSON when it
 * parses, else as a string. A leading `rotor.` addresses `vehicle.rotor.`.
 * Throws ConfigError for a malformed assignment.
 */
void apply_override(Json& doc, std::string_view assignment);

/// Builds a validated mission. Relative CSV paths resolve against `base_dir`.
[[nodiscard]] sim::MissionConfig to_mission(const Json& doc, const std::filesystem::path& base_dir = {});

[[nodiscard]] vehicle::VehicleConfig vehicle_from_json(const Json& j);
[[nodiscard]] atmosphere::AtmosphereModel atmosphere_from_json(const Json& j,
                                                               const std::filesystem::path& base_dir = {});

}  // namespace marsdrop::scenario
