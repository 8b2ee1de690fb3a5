#pragma once

#include <string>
#include <string_view>

#include <Eigen/Core>

#include "marsdrop/atmosphere.hpp"
#include "marsdrop/rotor_aero.hpp"

namespace marsdrop::vehicle {

using Vec3 = Eigen::Vector3d;

enum class VehiclePreset { ingenuity, advanced_mh, mad };

struct VehicleConfig {
  std::string name{"mad"};
  double gross_mass_kg{4.141};
  rotor_aero::RotorParams rotor{};
  double fuselage_cd{0.8};
  double base_side_m{0.14};
  /// Body inertia about the center of mass [kg m^2].
  Eigen::Matrix3d inertia{Eigen::Matrix3d::Identity() * (4.141 * 0.14 * 0.14 / 6.0)};

  [[nodiscard]] double base_area() const { return base_side_m * base_side_m; }
  [[nodiscard]] double weight() const;
  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

/// Diagonal inertia of a uniform cube of side s: m s^2 / 6 on each axis.
[[nodiscard]] Eigen::Matrix3d cube_inertia(double mass_kg, double side_m);

[[nodiscard]] VehicleConfig preset(VehiclePreset which);
/// Throws ConfigError for an unknown name.
[[nodiscard]] VehicleConfig preset(std::string_view name);
[[nodiscard]] std::string_view to_string(VehiclePreset which);

/// Rigid-body state. Position z is altitude above MOLA; axes are (east, north, up).
struct BodyState {
  Vec3 position_m{Vec3::Zero()};
  Vec3 velocity_ms{Vec3::Zero()};  ///< ground-relative
  Vec3 rotor_axis{Vec3::UnitZ()};  ///< unit thrust direction
  Vec3 angular_rate_rads{Vec3::Zero()};
  double omega_rads{0.0};          ///< rotor speed
};

struct RotorCommand {
  double ct_sigma{0.0};
  double motor_torque_Nm{0.0};
  Vec3 attitude_torque_Nm{Vec3::Zero()};
};

struct Wrench {
  Vec3 force_N{Vec3::Zero()};
  Vec3 torque_Nm{Vec3::Zero()};
  rotor_aero::RotorFlowState flow{};
  double thrust_N{0.0};
  double aero_torque_Nm{0.0};  ///< two-rotor aerodynamic torque Q
  double ct_sigma{0.0};        ///< applied after clipping
  double vh_ms{0.0};           ///< sqrt(T / (2 rho A)) at the current thrust
  bool saturated{false};
};

/// Fuselage drag -1/2 C_D rho A_base |V| V; zero for zero relative velocity.
[[nodiscard]] Vec3 fuselage_drag(const Vec3& v_rel_ms, double density_kgm3, const VehicleConfig& config);

/**
 * Net force and torque on the helicopter.
 *
 * Flow-relative velocity (velocity - wind) is split into the rotor-axis
 * component V_z (climb-positive) and the in-plane magnitude V_x. Thrust acts
 * along the rotor axis, the rotor reaction torque (Q_M - Q) about it, plus
 * fuselage drag, point-mass gravity along -up, and the commanded attitude torque.
 */
[[nodiscard]] Wrench total_wrench(const BodyState& state, const RotorCommand& cmd, const atmosphere::Ambient& ambient,
                                  const VehicleConfig& config, const Vec3& up = Vec3::UnitZ());

}  // namespace marsdrop::vehicle
