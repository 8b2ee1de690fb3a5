#pragma once

#include <string>
#include <string_view>

#include "marsdrop/atmosphere.hpp"
#include "marsdrop/constants.hpp"
#include "marsdrop/trajectory_log.hpp"

namespace marsdrop::edl {

/// Planar ballistic entry of a 70-deg sphere-cone aeroshell.
struct EntryConfig {
  double entry_mass_kg{256.0};
  double entry_velocity_ms{7300.0};                ///< planet-relative
  double flight_path_angle_rad{deg2rad(-12.0)};    ///< negative below the local horizon
  double aeroshell_diameter_m{2.65};
  double hypersonic_cd{1.7};
  double entry_altitude_m{125000.0};

  [[nodiscard]] double reference_area() const { return kPi * aeroshell_diameter_m * aeroshell_diameter_m / 4.0; }
  /// m / (C_D A) [kg/m^2]
  [[nodiscard]] double ballistic_coefficient() const { return entry_mass_kg / (hypersonic_cd * reference_area()); }
  void validate() const;
};

/// Disk-Gap-Band parachute with everything it carries.
struct ChuteConfig {
  double nominal_diameter_m{14.0};
  double drag_coefficient{0.62};
  double suspended_mass_kg{149.141};
  double deploy_mach_max{2.0};
  double deploy_altitude_min_m{0.0};

  [[nodiscard]] double nominal_area() const { return kPi * nominal_diameter_m * nominal_diameter_m / 4.0; }
  [[nodiscard]] double ballistic_coefficient() const {
    return suspended_mass_kg / (drag_coefficient * nominal_area());
  }
  void validate() const;
};

/// Ballistic coefficients [kg/m^2] of the two bodies after release.
struct SeparationModel {
  double beta_backshell{};
  double beta_vehicle{};
  void validate() const;
};

enum class Mission { pathfinder, insight, mad };

[[nodiscard]] std::string_view to_string(Mission mission);

/// Mass budget and EDL configuration of one mission scenario.
struct MissionPreset {
  std::string name;
  EntryConfig entry;
  ChuteConfig chute;
  double heatshield_mass_kg{};
  double backshell_chute_mass_kg{};
  double landed_mass_kg{};
  double fpa_min_deg{};
  double fpa_max_deg{};
  double reported_terminal_velocity_ms{};
};

[[nodiscard]] MissionPreset mission_preset(Mission mission);
/// Throws ConfigError for an unknown name.
[[nodiscard]] MissionPreset mission_preset(std::string_view name);

/// Drag coefficient of the MAD rotor disk in autorotation, referenced to the disk area.
inline constexpr double kAutorotationDiskCd = 1.11;

/// Backshell+chute (without the helicopter) and the autorotating helicopter.
[[nodiscard]] SeparationModel mad_separation_model();

struct EntryOptions {
  double dt_s{0.05};
  double t_max_s{3000.0};
  double ground_altitude_m{-8000.0};
};

struct EntryResult {
  TrajectoryLog log;
  bool trigger_reached{false};
  double trigger_time_s{};
  double trigger_altitude_m{};
  double trigger_speed_ms{};
  double trigger_flight_path_angle_rad{};
};

/**
 * Integrate the planar entry (drag and inverse-square gravity over a
 * spherical planet, no lift) until the Mach number drops to `mach_trigger`
 * or the vehicle reaches the ground. Trigger quantities are interpolated.
 */
[[nodiscard]] EntryResult simulate_entry(const EntryConfig& cfg, const atmosphere::AtmosphereModel& atm,
                                         double mach_trigger = 2.0, const EntryOptions& options = {});

/// sqrt(2 m g / (rho C_D S0)).
[[nodiscard]] double chute_terminal_velocity(const ChuteConfig& chute, double density_kgm3);

/// Downward acceleration g - rho v^2 C_D S0 / (2 m) under the chute.
[[nodiscard]] double chute_acceleration(const ChuteConfig& chute, double density_kgm3, double speed_ms);

struct ChuteStart {
  double altitude_m{};
  double speed_ms{};  ///< downward
};

struct ChuteOptions {
  double dt_s{0.01};
  double t_max_s{5000.0};
  double t0_s{0.0};
};

struct ChuteResult {
  TrajectoryLog log;
  bool reached_stop{false};
  double stop_time_s{};
  double stop_speed_ms{};
};

/// Vertical descent under the chute from `start` down to `stop_altitude_m`.
[[nodiscard]] ChuteResult simulate_chute_descent(const ChuteConfig& chute, const atmosphere::AtmosphereModel& atm,
                                                 const ChuteStart& start, double stop_altitude_m,
                                                 const ChuteOptions& options = {});

/**
 * Vertical gap after `t_s` between the two bodies released together at
 * speed `v0_ms` in uniform density; positive when the vehicle is below.
 */
[[nodiscard]] double separation_clearance(const SeparationModel& sep, double v0_ms, double density_kgm3, double t_s);

}  // namespace marsdrop::edl
