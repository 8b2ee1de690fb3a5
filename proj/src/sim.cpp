#include "marsdrop/sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Geometry>

#include "marsdrop/errors.hpp"

namespace marsdrop::sim {

namespace {

using vehicle::BodyState;
using vehicle::RotorCommand;
using Vec3 = Eigen::Vector3d;

struct Rate {
  Vec3 position;
  Vec3 velocity;
  Vec3 axis;
  Vec3 angular_rate;
  double omega{};
};

Rate derivative(const BodyState& s, const RotorCommand& cmd, const vehicle::VehicleConfig& config,
                const atmosphere::AtmosphereModel& atm) {
  const auto ambient = atm.at(s.position_m.z());
  const auto w = vehicle::total_wrench(s, cmd, ambient, config);
  Rate r;
  r.position = s.velocity_ms;
  r.velocity = w.force_N / config.gross_mass_kg;
  r.axis = s.angular_rate_rads.cross(s.rotor_axis);
  const Vec3 gyro = s.angular_rate_rads.cross(config.inertia * s.angular_rate_rads);
  r.angular_rate = config.inertia.ldlt().solve(w.torque_Nm - gyro);
  r.omega = (cmd.motor_torque_Nm - w.aero_torque_Nm) / config.rotor.rotor_inertia();
  return r;
}

BodyState advance(const BodyState& s, const Rate& r, double h) {
  BodyState out = s;
  out.position_m += h * r.position;
  out.velocity_ms += h * r.velocity;
  out.rotor_axis += h * r.axis;
  out.angular_rate_rads += h * r.angular_rate;
  out.omega_rads += h * r.omega;
  return out;
}

bool finite(const BodyState& s) {
  return s.position_m.allFinite() && s.velocity_ms.allFinite() && s.rotor_axis.allFinite() &&
         s.angular_rate_rads.allFinite() && std::isfinite(s.omega_rads);
}

/// Appends rows of `src` strictly before `t_end` and its events up to `t_end`.
void append_until(TrajectoryLog& dst, const TrajectoryLog& src, double t_end) {
  for (const auto& row : src.rows()) {
    if (row.t_s >= t_end) {
      break;
    }
    if (dst.empty() || row.t_s > dst.back().t_s) {
      dst.append(row);
    }
  }
  for (const auto& ev : src.events()) {
    if (ev.t_s <= t_end) {
      dst.add_event(ev.t_s, ev.name);
    }
  }
}

double weight_hover_velocity(const vehicle::VehicleConfig& v, double rho) {
  return rotor_aero::hover_induced_velocity(v.weight(), rho, v.rotor.disk_area());
}

}  // namespace

void MissionConfig::validate() const {
  vehicle.validate();
  if (entry) {
    entry->validate();
  }
  if (chute) {
    chute->validate();
  }
  const auto& ig = integrator;
  if (!(ig.dt_entry_s > 0.0) || !(ig.dt_chute_s > 0.0) || !(ig.dt_release_s > 0.0) || !(ig.t_max_s > 0.0)) {
    throw ConfigError("integrator: time steps and t_max must be positive");
  }
  if (!(ig.hover_speed_ms > 0.0) || !(ig.hover_hold_s >= 0.0) || !(ig.post_hover_s >= 0.0)) {
    throw ConfigError("integrator: invalid hover criterion");
  }
  if (!(spin_up_time_s >= 0.0)) {
    throw ConfigError("phases: spin-up time must be non-negative");
  }
  if (release_enabled) {
    if (!atmosphere.covers(release.altitude_m)) {
      throw ConfigError("release altitude outside the atmosphere profile");
    }
    if (!(release.initial_speed_ms >= 0.0)) {
      throw ConfigError("release: initial speed must be non-negative");
    }
    if (!(release.initial_alpha_rad >= 0.0) || !(release.initial_alpha_rad <= kPi / 2.0)) {
      throw ConfigError("release: initial alpha must be within [0, 90] deg");
    }
  }
  if (!(guidance.margin >= 0.0) || !(guidance.capture_gain_per_s > 0.0)) {
    throw ConfigError("guidance: margin must be >= 0 and capture gain > 0");
  }
  for (const auto& g : {control.pi_kp, control.pi_ki, control.pd_kp, control.pd_kd}) {
    if (g && !(*g >= 0.0)) {
      throw ConfigError("control: gains must be non-negative");
    }
  }
  if (!entry && chute && !(chute_start.speed_ms >= 0.0)) {
    throw ConfigError("phases: chute start speed must be non-negative");
  }
}

vehicle::BodyState step(const BodyState& state, const RotorCommand& cmd, double dt_s,
                        const vehicle::VehicleConfig& config, const atmosphere::AtmosphereModel& atmosphere) {
  if (!(dt_s > 0.0)) {
    throw ConfigError("step: dt must be positive");
  }
  const Rate k1 = derivative(state, cmd, config, atmosphere);
  const Rate k2 = derivative(advance(state, k1, 0.5 * dt_s), cmd, config, atmosphere);
  const Rate k3 = derivative(advance(state, k2, 0.5 * dt_s), cmd, config, atmosphere);
  const Rate k4 = derivative(advance(state, k3, dt_s), cmd, config, atmosphere);
  Rate sum;
  sum.position = k1.position + 2.0 * k2.position + 2.0 * k3.position + k4.position;
  sum.velocity = k1.velocity + 2.0 * k2.velocity + 2.0 * k3.velocity + k4.velocity;
  sum.axis = k1.axis + 2.0 * k2.axis + 2.0 * k3.axis + k4.axis;
  sum.angular_rate = k1.angular_rate + 2.0 * k2.angular_rate + 2.0 * k3.angular_rate + k4.angular_rate;
  sum.omega = k1.omega + 2.0 * k2.omega + 2.0 * k3.omega + k4.omega;
  BodyState out = advance(state, sum, dt_s / 6.0);
  if (!finite(out)) {
    throw SimulationError("step: non-finite state at altitude " + std::to_string(state.position_m.z()));
  }
  out.rotor_axis.normalize();
  out.omega_rads = std::clamp(out.omega_rads, 0.0, config.rotor.omega_max_rads);
  return out;
}

std::string_view to_string(RunStatus status) {
  return status == RunStatus::complete ? "complete" : "incomplete";
}

namespace {

struct ReleaseStart {
  double t_s{};
  double altitude_m{};
  double speed_ms{};
  double omega_rads{};
};

void run_released(const MissionConfig& cfg, const ReleaseStart& start, ScenarioResult& result) {
  const auto& veh = cfg.vehicle;
  const auto& rotor = veh.rotor;
  const auto& atm = cfg.atmosphere;
  const auto& ig = cfg.integrator;
  const double dt = ig.dt_release_s;
  const double mass = veh.gross_mass_kg;
  const Vec3 up = Vec3::UnitZ();

  auto pi = control::PiTorqueController::for_rotor(rotor, rotor.omega_nominal_rads);
  if (cfg.control.pi_kp || cfg.control.pi_ki) {
    pi = control::PiTorqueController(cfg.control.pi_kp.value_or(pi.kp()), cfg.control.pi_ki.value_or(pi.ki()),
                                     rotor.omega_nominal_rads, rotor.torque_max_Nm);
  }
  const double pitch_inertia = veh.inertia(1, 1);
  auto pd = control::PdAttitudeController::critically_damped(pitch_inertia);
  if (cfg.control.pd_kp || cfg.control.pd_kd) {
    pd = control::PdAttitudeController(cfg.control.pd_kp.value_or(pd.kp()), cfg.control.pd_kd.value_or(pd.kd()));
  }

  const double vh_release = weight_hover_velocity(veh, atm.density(start.altitude_m));
  control::AlphaSchedule schedule = control::AlphaSchedule::fixed(cfg.release.initial_alpha_rad);
  if (cfg.guidance.mode == GuidanceMode::planned) {
    schedule = control::plan_alpha_schedule(start.speed_ms, vh_release, cfg.guidance.margin, rotor,
                                            cfg.guidance.planner);
  }
  result.schedule = schedule;

  BodyState state;
  state.position_m = Vec3(0.0, 0.0, start.altitude_m);
  state.velocity_ms = Vec3(0.0, 0.0, -start.speed_ms);
  state.omega_rads = start.omega_rads;
  state.rotor_axis =
      control::commanded_axis(state.velocity_ms - atm.at(start.altitude_m).wind_ms, schedule.braking_alpha(), up);

  result.log.add_event(start.t_s, "release");
  result.release_time_s = start.t_s;
  result.release_speed_ms = start.speed_ms;

  bool capturing = false;
  bool in_window = false;
  double window_start = 0.0;
  double window_altitude = 0.0;
  std::optional<double> hover_declared;

  const auto n_max = static_cast<long>(std::ceil(ig.t_max_s / dt));
  for (long n = 0; n <= n_max; ++n) {
    const double t = start.t_s + static_cast<double>(n) * dt;
    const auto ambient = atm.at(state.position_m.z());
    const double rho = ambient.density_kgm3;
    const Vec3 v_rel = state.velocity_ms - ambient.wind_ms;
    const double vh_weight = weight_hover_velocity(veh, rho);
    const double ratio = v_rel.norm() / vh_weight;

    if (!capturing && ratio < schedule.capture_speed_ratio) {
      capturing = true;
      result.capture_time_s = t;
      result.log.add_event(t, "capture_start");
    }

    RotorCommand cmd;
    Vec3 target = up;
    if (capturing) {
      const Vec3 a_des = -cfg.guidance.capture_gain_per_s * state.velocity_ms + kMarsGravity * up;
      target = a_des.normalized();
      const double tip = rotor.tip_speed(state.omega_rads);
      const double denom = rotor.solidity * rho * rotor.disk_area() * tip * tip;
      cmd.ct_sigma = denom > 0.0 ? std::clamp(mass * a_des.norm() / denom, 0.0, rotor.ct_sigma_max) : 0.0;
    } else {
      target = control::commanded_axis(v_rel, schedule.alpha_at(ratio), up);
      cmd.ct_sigma = rotor.ct_sigma_max;
    }
    cmd.attitude_torque_Nm = pd.track_axis(state.rotor_axis, target, state.angular_rate_rads);
    const auto trial = vehicle::total_wrench(state, cmd, ambient, veh);
    cmd.motor_torque_Nm = pi.step(state.omega_rads, trial.aero_torque_Nm, dt);
    const auto w = vehicle::total_wrench(state, cmd, ambient, veh);

    const double speed = state.velocity_ms.norm();
    if (!hover_declared) {
      if (speed < ig.hover_speed_ms) {
        if (!in_window) {
          in_window = true;
          window_start = t;
          window_altitude = state.position_m.z();
        }
        if (t - window_start >= ig.hover_hold_s - 1e-9) {
          hover_declared = t;
          result.hover_time_s = window_start;
          result.hover_altitude_m = window_altitude;
          result.altitude_loss_m = start.altitude_m - window_altitude;
          result.log.add_event(window_start, "hover");
        }
      } else {
        in_window = false;
      }
    }

    LogRow row;
    row.t_s = t;
    row.phase = hover_declared ? Phase::hover : Phase::released;
    row.altitude_m = state.position_m.z();
    row.velocity_ms = state.velocity_ms;
    row.speed_ms = speed;
    row.mach = speed / ambient.sound_speed_ms;
    row.alpha_deg = rad2deg(control::angle_of_attack(v_rel, state.rotor_axis));
    row.omega_rads = state.omega_rads;
    row.ct_sigma = w.ct_sigma;
    row.q_aero_Nm = w.aero_torque_Nm;
    row.q_motor_Nm = cmd.motor_torque_Nm;
    row.vi_ms = w.flow.vi_ms;
    row.vh_ms = w.vh_ms;
    if (w.vh_ms > 0.0) {
      row.vz_bar = -w.flow.vz_ms / w.vh_ms;
      row.vx_bar = w.flow.vx_ms / w.vh_ms;
      const auto cls = rotor_aero::vrs_classify(row.vx_bar, row.vz_bar, rotor);
      row.regime = cls.regime;
      row.severity = cls.severity;
    }
    result.peak_severity = std::max(result.peak_severity, row.severity);
    result.log.append(row);

    if (hover_declared && t - *hover_declared >= ig.post_hover_s - 1e-9) {
      result.status = RunStatus::complete;
      return;
    }
    state = step(state, cmd, dt, veh, atm);
  }
  result.message = "t_max reached before hover";
}

}  // namespace

ScenarioResult run_scenario(const MissionConfig& cfg) {
  cfg.validate();
  ScenarioResult result;
  const auto& atm = cfg.atmosphere;
  const auto& ig = cfg.integrator;

  if (cfg.chute) {
    result.chute_terminal_velocity_ms = edl::chute_terminal_velocity(*cfg.chute, atm.density(cfg.release.altitude_m));
  }

  double t = 0.0;
  std::optional<edl::ChuteStart> chute_start;
  if (cfg.entry) {
    const auto entry = edl::simulate_entry(*cfg.entry, atm, cfg.chute ? cfg.chute->deploy_mach_max : 2.0,
                                           {ig.dt_entry_s, 3000.0, -8000.0});
    result.log.add_event(0.0, "entry_interface");
    if (!entry.trigger_reached) {
      append_until(result.log, entry.log, entry.log.back().t_s + 1.0);
      result.message = "Mach trigger not reached during entry";
      return result;
    }
    result.mach2_altitude_m = entry.trigger_altitude_m;
    append_until(result.log, entry.log, entry.trigger_time_s);
    t = entry.trigger_time_s;
    chute_start = edl::ChuteStart{entry.trigger_altitude_m, entry.trigger_speed_ms};
    if (!cfg.chute) {
      result.status = RunStatus::complete;
      return result;
    }
  } else if (cfg.chute) {
    chute_start = cfg.chute_start;
    result.log.add_event(0.0, "chute_deploy");
  }

  ReleaseStart release{t, cfg.release.altitude_m, cfg.release.initial_speed_ms, cfg.vehicle.rotor.omega_nominal_rads};
  if (cfg.chute) {
    const auto& chute = *cfg.chute;
    const double stop = std::max(cfg.release.altitude_m, chute.deploy_altitude_min_m);
    const double spin_margin =
        cfg.release_enabled ? edl::chute_terminal_velocity(chute, atm.density(stop)) * cfg.spin_up_time_s : 0.0;
    const auto first = edl::simulate_chute_descent(chute, atm, *chute_start, stop + spin_margin,
                                                   {ig.dt_chute_s, 5000.0, t});
    if (!first.reached_stop) {
      append_until(result.log, first.log, first.log.back().t_s + 1.0);
      result.message = "chute descent did not reach the release altitude";
      return result;
    }
    append_until(result.log, first.log, first.stop_time_s);
    t = first.stop_time_s;
    if (!cfg.release_enabled) {
      result.release_speed_ms = first.stop_speed_ms;
      result.status = RunStatus::complete;
      return result;
    }
    result.log.add_event(t, "spin_up_start");
    const double spin_start = t;
    const auto second = edl::simulate_chute_descent(chute, atm, {stop + spin_margin, first.stop_speed_ms}, stop,
                                                    {ig.dt_chute_s, 5000.0, t});
    if (!second.reached_stop) {
      result.message = "chute descent did not reach the release altitude";
      return result;
    }
    const double omega_cmd = cfg.vehicle.rotor.omega_nominal_rads;
    const auto ramp = [&](double time) {
      if (cfg.spin_up_time_s == 0.0) {
        return omega_cmd;
      }
      return omega_cmd * std::clamp((time - spin_start) / cfg.spin_up_time_s, 0.0, 1.0);
    };
    for (auto row : second.log.rows()) {
      if (row.t_s >= second.stop_time_s) {
        break;
      }
      if (!result.log.empty() && row.t_s <= result.log.back().t_s) {
        continue;
      }
      row.phase = Phase::spin_up;
      row.omega_rads = ramp(row.t_s);
      result.log.append(row);
    }
    release = {second.stop_time_s, stop, second.stop_speed_ms, ramp(second.stop_time_s)};
  }

  if (!cfg.release_enabled) {
    result.status = RunStatus::complete;
    return result;
  }
  if (!result.log.empty() && release.t_s <= result.log.back().t_s) {
    release.t_s = std::nextafter(result.log.back().t_s, INFINITY);
  }
  run_released(cfg, release, result);
  return result;
}

}  // namespace marsdrop::sim
