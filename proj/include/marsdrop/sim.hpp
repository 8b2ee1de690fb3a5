#pragma once

#include <optional>
#include <string>

#include "marsdrop/atmosphere.hpp"
#include "marsdrop/control.hpp"
#include "marsdrop/edl.hpp"
#include "marsdrop/trajectory_log.hpp"
#include "marsdrop/vehicle.hpp"

namespace marsdrop::sim {

struct ReleaseConfig {
  double altitude_m{6000.0};
  double initial_alpha_rad{kPi / 2.0};
  double initial_speed_ms{30.0};  ///< downward; replaced by the chute speed when a chute phase runs
};

/// Unset gains take the defaults derived from the vehicle inertias.
struct ControlGains {
  std::optional<double> pi_kp;
  std::optional<double> pi_ki;
  std::optional<double> pd_kp;
  std::optional<double> pd_kd;
};

enum class GuidanceMode { fixed, planned };

struct GuidanceConfig {
  GuidanceMode mode{GuidanceMode::fixed};
  double margin{0.0};
  double capture_gain_per_s{1.0};  ///< velocity feedback gain of the hover capture law
  control::PlannerOptions planner{};
};

struct IntegratorConfig {
  double dt_entry_s{0.05};
  double dt_chute_s{0.01};
  double dt_release_s{0.001};
  double t_max_s{600.0};        ///< limit on the released phase
  double hover_speed_ms{0.5};
  double hover_hold_s{1.0};
  double post_hover_s{2.0};     ///< logged hover time after the hover event
};

struct MissionConfig {
  std::string name{"mad"};
  vehicle::VehicleConfig vehicle{};
  atmosphere::AtmosphereModel atmosphere{atmosphere::AtmosphereModel::mars_default()};
  std::optional<edl::EntryConfig> entry;
  std::optional<edl::ChuteConfig> chute;
  /// Chute initial condition when no entry phase runs.
  edl::ChuteStart chute_start{21000.0, 450.0};
  double spin_up_time_s{5.0};
  bool release_enabled{true};
  ReleaseConfig release{};
  ControlGains control{};
  GuidanceConfig guidance{};
  IntegratorConfig integrator{};

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

/// Fixed-step RK4 over total_wrench and dOmega/dt = (Q_M - Q) / I_rotor, commands held over the step.
[[nodiscard]] vehicle::BodyState step(const vehicle::BodyState& state, const vehicle::RotorCommand& cmd, double dt_s,
                                      const vehicle::VehicleConfig& config,
                                      const atmosphere::AtmosphereModel& atmosphere);

enum class RunStatus { complete, incomplete };

[[nodiscard]] std::string_view to_string(RunStatus status);

struct ScenarioResult {
  TrajectoryLog log;
  RunStatus status{RunStatus::incomplete};
  std::string message;
  std::optional<double> mach2_altitude_m;
  std::optional<double> release_time_s;
  std::optional<double> release_speed_ms;  ///< also set when the chute phase ends at the release altitude
  std::optional<double> capture_time_s;
  std::optional<double> hover_time_s;
  std::optional<double> hover_altitude_m;
  std::optional<double> altitude_loss_m;
  std::optional<double> chute_terminal_velocity_ms;  ///< closed form at the release altitude
  double peak_severity{0.0};
  std::optional<control::AlphaSchedule> schedule;
};

/// Runs the configured phases in order. Deterministic for a given config.
[[nodiscard]] ScenarioResult run_scenario(const MissionConfig& cfg);

}  // namespace marsdrop::sim
