#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "marsdrop/scenario.hpp"
#include "marsdrop/sim.hpp"

namespace marsdrop::cli {

enum class Subcommand { entry, chute, deploy, vrsmap, compare };

[[nodiscard]] std::string_view to_string(Subcommand sub);

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIncomplete = 3;
inline constexpr int kExitIo = 4;

struct RunRequest {
  Subcommand subcommand{Subcommand::deploy};
  std::optional<std::filesystem::path> config_path;
  std::optional<std::string> preset;
  std::filesystem::path output_dir;
  std::vector<std::string> overrides;  ///< `key=value`, applied in order after the config is loaded
};

/**
 * Parses `argv` (without the program name). Throws ConfigError for an unknown
 * subcommand, both --preset and --config, a malformed --set, or a missing
 * source for entry/chute/deploy (vrsmap and compare default to the mad preset).
 * The output directory is --out, else $MARSDROP_OUT, else ./out.
 */
[[nodiscard]] RunRequest parse_args(const std::vector<std::string>& args);

/// Scenario document for the request: preset or file, stage flags of the subcommand, then overrides.
[[nodiscard]] scenario::Json resolve_document(const RunRequest& request);

/// summary.json content; `status` is "incomplete" for an empty log.
[[nodiscard]] scenario::Json summary_json(const sim::ScenarioResult& result, const sim::MissionConfig& cfg);
[[nodiscard]] scenario::Json events_json(const TrajectoryLog& log);

/// Writes trajectory.csv, events.json and summary.json (plus edl.csv when EDL rows exist). IoError on failure.
void emit_outputs(const sim::ScenarioResult& result, const sim::MissionConfig& cfg, const RunRequest& request);

/// Grid CSV `vx_bar,vz_bar_descent_positive,vi_over_vh,regime,severity`.
void write_vrsmap_csv(std::ostream& out, const rotor_aero::RotorParams& params, double vx_max = 2.0,
                      double vz_min = -1.0, double vz_max = 3.0, double step = 0.05);

struct MissionComparison {
  std::string mission;
  edl::MissionPreset preset;
  std::optional<double> mach2_altitude_m;
  double terminal_velocity_ms{};            ///< closed form at the release altitude
  std::optional<double> simulated_speed_ms;  ///< chute speed on reaching the release altitude
};

/// Entry and chute of pathfinder, insight and mad under one atmosphere.
[[nodiscard]] std::vector<MissionComparison> compare_missions(const sim::MissionConfig& base);
/// Rows are quantities, columns are missions.
void write_compare_csv(std::ostream& out, const std::vector<MissionComparison>& rows);

/// Full command execution; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace marsdrop::cli
