#include "marsdrop/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Geometry>

#include "marsdrop/errors.hpp"

namespace marsdrop::control {

PiTorqueController::PiTorqueController(double kp, double ki, double omega_cmd_rads, double torque_max_Nm)
    : kp_(kp), ki_(ki), omega_cmd_(omega_cmd_rads), torque_max_(torque_max_Nm) {
  if (!(kp >= 0.0) || !(ki >= 0.0) || !(torque_max_Nm > 0.0)) {
    throw ConfigError("PI controller: gains must be non-negative and torque limit positive");
  }
}

PiTorqueController PiTorqueController::for_rotor(const rotor_aero::RotorParams& rotor, double omega_cmd_rads,
                                                 double time_constant_s, double integral_time_s) {
  const double kp = rotor.rotor_inertia() / time_constant_s;
  return PiTorqueController(kp, kp / integral_time_s, omega_cmd_rads, rotor.torque_max_Nm);
}

double PiTorqueController::integral_cap() const {
  return ki_ > 0.0 ? torque_max_ / ki_ : 0.0;
}

double PiTorqueController::step(double omega_meas_rads, double q_aero_Nm, double dt_s) {
  if (!(dt_s > 0.0)) {
    throw ConfigError("PI controller: dt must be positive");
  }
  const double error = omega_cmd_ - omega_meas_rads;
  const double cap = integral_cap();
  const double trial = std::clamp(integral_ + error * dt_s, -cap, cap);
  const double unclamped = q_aero_Nm + kp_ * error + ki_ * trial;
  const bool pushing_rail = (unclamped > torque_max_ && error > 0.0) || (unclamped < -torque_max_ && error < 0.0);
  if (!pushing_rail) {
    integral_ = trial;
  }
  const double out = q_aero_Nm + kp_ * error + ki_ * integral_;
  return std::clamp(out, -torque_max_, torque_max_);
}

PdAttitudeController::PdAttitudeController(double kp, double kd, double alpha_cmd_rad)
    : kp_(kp), kd_(kd), alpha_cmd_(alpha_cmd_rad) {
  if (!(kp >= 0.0) || !(kd >= 0.0)) {
    throw ConfigError("PD controller: gains must be non-negative");
  }
}

PdAttitudeController PdAttitudeController::critically_damped(double inertia_kgm2, double natural_frequency_rads,
                                                             double alpha_cmd_rad) {
  const double wn = natural_frequency_rads;
  return PdAttitudeController(inertia_kgm2 * wn * wn, 2.0 * inertia_kgm2 * wn, alpha_cmd_rad);
}

double PdAttitudeController::torque(double alpha_meas_rad, double alpha_rate_rads) const {
  return kp_ * (alpha_cmd_ - alpha_meas_rad) - kd_ * alpha_rate_rads;
}

Vec3 PdAttitudeController::step(double alpha_meas_rad, double alpha_rate_rads, const Vec3& pitch_axis,
                                double dt_s) const {
  if (!(dt_s > 0.0)) {
    throw ConfigError("PD controller: dt must be positive");
  }
  return torque(alpha_meas_rad, alpha_rate_rads) * pitch_axis;
}

Vec3 PdAttitudeController::track_axis(const Vec3& rotor_axis, const Vec3& target_axis,
                                      const Vec3& angular_rate) const {
  const Vec3 cross = rotor_axis.cross(target_axis);
  const double s = cross.norm();
  const double angle = std::atan2(s, rotor_axis.dot(target_axis));
  Vec3 out = -kd_ * angular_rate;
  if (s > 0.0) {
    out += kp_ * angle * cross / s;
  }
  return out;
}

double angle_of_attack(const Vec3& v_rel, const Vec3& rotor_axis) {
  const double speed = v_rel.norm();
  if (speed == 0.0) {
    return kPi / 2.0;
  }
  return std::asin(std::clamp(-v_rel.dot(rotor_axis) / speed, -1.0, 1.0));
}

Vec3 commanded_axis(const Vec3& v_rel, double alpha_rad, const Vec3& up, const Vec3& heading, double min_speed) {
  const double speed = v_rel.norm();
  if (!(speed > min_speed)) {
    return up;
  }
  const Vec3 axial = -v_rel / speed;
  Vec3 tilt = up - up.dot(axial) * axial;
  if (tilt.norm() < 1e-9) {
    tilt = heading - heading.dot(axial) * axial;
  }
  if (tilt.norm() < 1e-12) {
    return axial;
  }
  tilt.normalize();
  const double delta = kPi / 2.0 - alpha_rad;
  return (std::cos(delta) * axial + std::sin(delta) * tilt).normalized();
}

AlphaSchedule AlphaSchedule::fixed(double alpha_rad) {
  AlphaSchedule s;
  s.entries.push_back({std::numeric_limits<double>::infinity(), alpha_rad});
  s.capture_speed_ratio = 1.0;
  return s;
}

double AlphaSchedule::alpha_at(double speed_ratio) const {
  double alpha = entries.front().alpha_rad;
  for (const auto& e : entries) {
    if (speed_ratio <= e.trigger_speed_ratio) {
      alpha = e.alpha_rad;
    }
  }
  return alpha;
}

CandidateResult simulate_constant_alpha(double v0_ms, double vh_ms, double alpha_rad, double margin,
                                        const rotor_aero::RotorParams& params, const PlannerOptions& options,
                                        bool keep_path) {
  if (!(vh_ms > 0.0) || !(v0_ms >= 0.0) || !(margin >= 0.0)) {
    throw ConfigError("planner: need v0 >= 0, vh > 0, margin >= 0");
  }
  CandidateResult out;
  out.alpha_rad = alpha_rad;

  const double tip = params.tip_speed(params.omega_nominal_rads);
  const double thrust_accel = kMarsGravity * params.ct_sigma_max * params.solidity * tip * tip / (2.0 * vh_ms * vh_ms);
  const Vec3 up = Vec3::UnitZ();
  const Vec3 gravity = -kMarsGravity * up;
  // The rotor sees the v_h of its own thrust, not of the weight.
  const double vh_rotor = vh_ms * std::sqrt(thrust_accel / kMarsGravity);

  // State: position (x, z) and velocity (x, z) in the vertical plane.
  using State = Eigen::Matrix<double, 6, 1>;
  const auto accel = [&](const Vec3& v) { return Vec3(thrust_accel * commanded_axis(v, alpha_rad, up) + gravity); };
  const auto deriv = [&](const State& y) {
    State d;
    d.head<3>() = y.tail<3>();
    d.tail<3>() = accel(y.tail<3>());
    return d;
  };

  State y = State::Zero();
  y(5) = -v0_ms;
  const double capture_speed = options.capture_speed_ratio * vh_ms;
  double t = 0.0;
  const auto n_max = static_cast<long>(std::ceil(options.t_max_s / options.dt_s));
  for (long n = 0;; ++n) {
    const Vec3 v = y.tail<3>();
    const double speed = v.norm();
    const Vec3 axis = commanded_axis(v, alpha_rad, up);
    const double vz = v.dot(axis);
    const double vx = (v - vz * axis).norm();
    const auto raw = rotor_aero::vrs_classify(vx / vh_rotor, -vz / vh_rotor, params);
    const auto inflated = rotor_aero::vrs_classify_inflated(vx / vh_rotor, -vz / vh_rotor, margin, params);
    out.peak_severity = std::max(out.peak_severity, raw.severity);
    out.crosses_region = out.crosses_region || inflated.regime == rotor_aero::Regime::vrs;
    if (keep_path) {
      out.path.push_back({t, y(2), speed / vh_ms, vx / vh_rotor, -vz / vh_rotor, raw.severity});
    }
    if (speed < capture_speed || (v0_ms == 0.0 && n == 0)) {
      out.reached_capture = true;
      out.altitude_loss_m = -y(2);
      return out;
    }
    if (n >= n_max) {
      out.altitude_loss_m = -y(2);
      return out;
    }
    const double dt = options.dt_s;
    const State k1 = deriv(y);
    const State k2 = deriv(y + 0.5 * dt * k1);
    const State k3 = deriv(y + 0.5 * dt * k2);
    const State k4 = deriv(y + dt * k3);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = static_cast<double>(n + 1) * dt;
  }
}

AlphaSchedule plan_alpha_schedule(double v0_ms, double vh_ms, double margin, const rotor_aero::RotorParams& params,
                                  const PlannerOptions& options) {
  AlphaSchedule schedule;
  schedule.capture_speed_ratio = options.capture_speed_ratio;

  const auto reference = simulate_constant_alpha(v0_ms, vh_ms, kPi / 2.0, margin, params, options);
  schedule.reference_altitude_loss_m = reference.altitude_loss_m;
  schedule.reference_crosses_vrs = reference.crosses_region;

  const auto finish = [&](const CandidateResult& c, bool flagged) {
    schedule.flagged = flagged;
    schedule.predicted_altitude_loss_m = c.altitude_loss_m;
    schedule.peak_severity = c.peak_severity;
    const double start_ratio = v0_ms / vh_ms;
    schedule.entries.push_back({start_ratio, c.alpha_rad});
    if (c.alpha_rad != kPi / 2.0 && options.capture_speed_ratio < start_ratio) {
      schedule.entries.push_back({options.capture_speed_ratio, kPi / 2.0});
    }
    return schedule;
  };

  if (reference.reached_capture && !reference.crosses_region) {
    return finish(reference, false);
  }
  CandidateResult least_severe = reference;
  const auto steps = static_cast<int>(std::floor((kPi / 2.0 - options.alpha_min_rad) / options.alpha_step_rad + 1e-9));
  for (int i = 1; i <= steps; ++i) {
    const double alpha = kPi / 2.0 - i * options.alpha_step_rad;
    const auto candidate = simulate_constant_alpha(v0_ms, vh_ms, alpha, margin, params, options);
    if (candidate.reached_capture && !candidate.crosses_region) {
      return finish(candidate, false);
    }
    if (candidate.reached_capture && candidate.peak_severity < least_severe.peak_severity) {
      least_severe = candidate;
    }
  }
  return finish(least_severe, true);
}

}  // namespace marsdrop::control
