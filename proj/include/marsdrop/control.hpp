#pragma once

#include <vector>

#include <Eigen/Core>

#include "marsdrop/constants.hpp"
#include "marsdrop/rotor_aero.hpp"

namespace marsdrop::control {

using Vec3 = Eigen::Vector3d;

/**
 * @brief Rotor-speed PI loop with aerodynamic-torque feedforward.
 *
 * Q_M = clamp(Q_ff + kp e + ki \int e, +-torque_max), e = omega_cmd - omega.
 * The integral is frozen while the output is saturated in the direction of
 * the error and is capped so that ki * integral never exceeds torque_max.
 */
class PiTorqueController {
 public:
  PiTorqueController(double kp, double ki, double omega_cmd_rads, double torque_max_Nm);

  /// Gains for a first-order rotor-speed response with the given time constant.
  static PiTorqueController for_rotor(const rotor_aero::RotorParams& rotor, double omega_cmd_rads,
                                      double time_constant_s = 0.2, double integral_time_s = 1.0);

  double step(double omega_meas_rads, double q_aero_Nm, double dt_s);

  void set_command(double omega_cmd_rads) { omega_cmd_ = omega_cmd_rads; }
  [[nodiscard]] double command() const { return omega_cmd_; }
  [[nodiscard]] double integral() const { return integral_; }
  [[nodiscard]] double integral_cap() const;
  [[nodiscard]] double kp() const { return kp_; }
  [[nodiscard]] double ki() const { return ki_; }

 private:
  double kp_;
  double ki_;
  double omega_cmd_;
  double torque_max_;
  double integral_{0.0};
};

/**
 * @brief PD loop on angle of attack (angle between flow velocity and rotor disk).
 *
 * Scalar law kp (alpha_cmd - alpha) - kd alpha_rate, applied about the axis
 * whose positive rotation increases alpha.
 */
class PdAttitudeController {
 public:
  PdAttitudeController(double kp, double kd, double alpha_cmd_rad = kPi / 2.0);

  /// Critically damped gains at `natural_frequency` for the given axis inertia.
  static PdAttitudeController critically_damped(double inertia_kgm2, double natural_frequency_rads = 3.0,
                                                double alpha_cmd_rad = kPi / 2.0);

  [[nodiscard]] double torque(double alpha_meas_rad, double alpha_rate_rads) const;
  /// Torque vector about `pitch_axis` (unit; positive rotation increases alpha).
  [[nodiscard]] Vec3 step(double alpha_meas_rad, double alpha_rate_rads, const Vec3& pitch_axis, double dt_s) const;

  /// Three-axis law steering `rotor_axis` onto `target_axis` with rate damping on all axes.
  [[nodiscard]] Vec3 track_axis(const Vec3& rotor_axis, const Vec3& target_axis, const Vec3& angular_rate) const;

  void set_alpha_command(double alpha_cmd_rad) { alpha_cmd_ = alpha_cmd_rad; }
  [[nodiscard]] double alpha_command() const { return alpha_cmd_; }
  [[nodiscard]] double kp() const { return kp_; }
  [[nodiscard]] double kd() const { return kd_; }

 private:
  double kp_;
  double kd_;
  double alpha_cmd_;
};

/// Angle of attack of `rotor_axis` in flow `v_rel`; pi/2 for axial descent, and for zero flow.
[[nodiscard]] double angle_of_attack(const Vec3& v_rel, const Vec3& rotor_axis);

/**
 * Rotor axis giving angle of attack `alpha_rad` in flow `v_rel`.
 *
 * Starts from the axial attitude (-v_rel direction) and tilts by
 * (90 deg - alpha) toward `up`; when the flow is vertical the tilt goes toward
 * `heading`. Returns `up` when the flow is slower than `min_speed`.
 */
[[nodiscard]] Vec3 commanded_axis(const Vec3& v_rel, double alpha_rad, const Vec3& up = Vec3::UnitZ(),
                                  const Vec3& heading = Vec3::UnitX(), double min_speed = 0.5);

struct AlphaScheduleEntry {
  double trigger_speed_ratio{};  ///< entry applies once |V| / v_h drops to this value
  double alpha_rad{};
};

struct AlphaSchedule {
  std::vector<AlphaScheduleEntry> entries;  ///< triggers strictly decreasing
  double capture_speed_ratio{1.0};          ///< below this |V| / v_h the hover capture law takes over
  double predicted_altitude_loss_m{};
  double peak_severity{};                   ///< worst vrs_classify severity along the predicted path
  bool flagged{false};                      ///< no VRS-safe candidate was found
  double reference_altitude_loss_m{};       ///< alpha = 90 deg candidate
  bool reference_crosses_vrs{false};

  /// Axial descent all the way down to |V| = v_h.
  static AlphaSchedule fixed(double alpha_rad = kPi / 2.0);
  [[nodiscard]] double alpha_at(double speed_ratio) const;
  [[nodiscard]] double braking_alpha() const { return entries.front().alpha_rad; }
};

struct PlannerOptions {
  double alpha_step_rad{deg2rad(1.0)};
  double alpha_min_rad{deg2rad(1.0)};
  double dt_s{0.005};
  double t_max_s{300.0};
  double capture_speed_ratio{0.1};
};

struct PathSample {
  double t_s{};
  double altitude_change_m{};
  double speed_ratio{};
  double vx_bar{};  ///< normalized by the thrust v_h
  double vz_bar{};  ///< descent-positive
  double severity{};
};

struct CandidateResult {
  double alpha_rad{};
  double altitude_loss_m{};
  bool reached_capture{false};
  bool crosses_region{false};  ///< entered the margin-inflated VRS region
  double peak_severity{};
  std::vector<PathSample> path;
};

/**
 * Point-mass braking at constant angle of attack and full C_T/sigma, from a
 * vertical descent at v0 until |V| < capture_speed_ratio * v_h, with v_h the
 * hover induced velocity at the weight. Thrust-to-weight follows from v_h. The
 * VRS check is normalized by the induced velocity of the applied thrust.
 */
[[nodiscard]] CandidateResult simulate_constant_alpha(double v0_ms, double vh_ms, double alpha_rad, double margin,
                                                      const rotor_aero::RotorParams& params,
                                                      const PlannerOptions& options = {}, bool keep_path = false);

/**
 * Largest alpha (1 deg sweep from 90 deg down) whose constant-alpha braking
 * path stays outside the VRS region inflated by `margin`. Flagged when no
 * candidate is safe; the least severe one is returned then.
 */
[[nodiscard]] AlphaSchedule plan_alpha_schedule(double v0_ms, double vh_ms, double margin,
                                                const rotor_aero::RotorParams& params,
                                                const PlannerOptions& options = {});

}  // namespace marsdrop::control
