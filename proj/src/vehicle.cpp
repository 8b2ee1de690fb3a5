#include "marsdrop/vehicle.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "marsdrop/constants.hpp"
#include "marsdrop/errors.hpp"

namespace marsdrop::vehicle {

double VehicleConfig::weight() const { return gross_mass_kg * kMarsGravity; }

void VehicleConfig::validate() const {
  if (!(gross_mass_kg > 0.0)) {
    throw ConfigError("vehicle: gross mass must be positive");
  }
  if (!(fuselage_cd >= 0.0) || !(base_side_m > 0.0)) {
    throw ConfigError("vehicle: fuselage drag coefficient and base side must be non-negative / positive");
  }
  if (!inertia.allFinite() || !inertia.isApprox(inertia.transpose(), 1e-12)) {
    throw ConfigError("vehicle: inertia must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(inertia);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw ConfigError("vehicle: inertia must be positive definite");
  }
  rotor.validate();
}

Eigen::Matrix3d cube_inertia(double mass_kg, double side_m) {
  return Eigen::Matrix3d::Identity() * (mass_kg * side_m * side_m / 6.0);
}

std::string_view to_string(VehiclePreset which) {
  switch (which) {
    case VehiclePreset::ingenuity:
      return "ingenuity";
    case VehiclePreset::advanced_mh:
      return "advanced_mh";
    case VehiclePreset::mad:
      return "mad";
  }
  return "mad";
}

VehicleConfig preset(VehiclePreset which) {
  // Rotor constants not listed per design (profile drag, stall, f, k, torque
  // limit, fuselage) are shared across designs.
  VehicleConfig cfg;
  cfg.name = std::string(to_string(which));
  auto& r = cfg.rotor;
  r.radius_m = 0.605;
  switch (which) {
    case VehiclePreset::ingenuity:
      cfg.gross_mass_kg = 1.8;
      r.solidity = 0.148;
      r.ct_sigma_design = 0.1;
      r.ct_sigma_max = 0.135;
      r.blade_count = 2;
      r.omega_nominal_rads = rpm2rads(2575.0);
      r.omega_max_rads = 1.05 * r.omega_nominal_rads;
      break;
    case VehiclePreset::advanced_mh:
      cfg.gross_mass_kg = 4.6;
      r.solidity = 0.248;
      r.ct_sigma_design = 0.115;
      r.ct_sigma_max = 0.135;
      r.blade_count = 4;
      r.omega_nominal_rads = rpm2rads(2943.0);
      r.omega_max_rads = 1.05 * r.omega_nominal_rads;
      break;
    case VehiclePreset::mad:
      cfg.gross_mass_kg = 4.141;
      r.solidity = 0.404;
      r.ct_sigma_design = 0.095;
      r.ct_sigma_max = 0.161;
      r.blade_count = 4;
      r.omega_nominal_rads = rpm2rads(2882.0);
      r.omega_max_rads = 302.0;
      break;
  }
  cfg.inertia = cube_inertia(cfg.gross_mass_kg, cfg.base_side_m);
  return cfg;
}

VehicleConfig preset(std::string_view name) {
  for (auto which : {VehiclePreset::ingenuity, VehiclePreset::advanced_mh, VehiclePreset::mad}) {
    if (name == to_string(which)) {
      return preset(which);
    }
  }
  throw ConfigError("unknown vehicle preset '" + std::string(name) + "'");
}

Vec3 fuselage_drag(const Vec3& v_rel_ms, double density_kgm3, const VehicleConfig& config) {
  const double speed = v_rel_ms.norm();
  if (speed == 0.0) {
    return Vec3::Zero();
  }
  return -0.5 * config.fuselage_cd * density_kgm3 * config.base_area() * speed * v_rel_ms;
}

Wrench total_wrench(const BodyState& state, const RotorCommand& cmd, const atmosphere::Ambient& ambient,
                    const VehicleConfig& config, const Vec3& up) {
  Wrench out;
  const auto& rotor = config.rotor;
  const double rho = ambient.density_kgm3;
  const Vec3& axis = state.rotor_axis;

  const Vec3 v_rel = state.velocity_ms - ambient.wind_ms;
  const double vz = v_rel.dot(axis);
  const double vx = (v_rel - vz * axis).norm();

  const auto t = rotor_aero::thrust(cmd.ct_sigma, rotor, rho, state.omega_rads);
  out.thrust_N = t.thrust_N;
  out.ct_sigma = t.ct_sigma;
  out.saturated = t.saturated;
  out.vh_ms = rho > 0.0 ? rotor_aero::hover_induced_velocity(t.thrust_N, rho, rotor.disk_area()) : 0.0;

  const double vi = rotor_aero::induced_velocity(vx, vz, out.vh_ms, rotor);
  out.flow = rotor_aero::make_flow_state(vx, vz, state.omega_rads, vi, rotor);
  out.aero_torque_Nm = rotor_aero::torque(t.ct_sigma, out.flow, rotor, rho);

  const Vec3 gravity = -kMarsGravity * config.gross_mass_kg * up;
  out.force_N = t.thrust_N * axis + fuselage_drag(v_rel, rho, config) + gravity;
  out.torque_Nm = (cmd.motor_torque_Nm - out.aero_torque_Nm) * axis + cmd.attitude_torque_Nm;
  return out;
}

}  // namespace marsdrop::vehicle
