#include "marsdrop/edl.hpp"

#include <array>
#include <cmath>
#include <string>

#include "marsdrop/errors.hpp"
#include "marsdrop/events.hpp"

namespace marsdrop::edl {

namespace {

template <std::size_t N, typename Deriv>
std::array<double, N> rk4(const std::array<double, N>& y, double dt, Deriv&& f) {
  const auto axpy = [](const std::array<double, N>& a, double s, const std::array<double, N>& b) {
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + s * b[i];
    return out;
  };
  const auto k1 = f(y);
  const auto k2 = f(axpy(y, 0.5 * dt, k1));
  const auto k3 = f(axpy(y, 0.5 * dt, k2));
  const auto k4 = f(axpy(y, dt, k3));
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

double lerp(double a, double b, double w) { return a + w * (b - a); }

}  // namespace

void EntryConfig::validate() const {
  if (!(entry_mass_kg > 0.0)) throw ConfigError("entry: mass must be positive");
  if (!(aeroshell_diameter_m > 0.0)) throw ConfigError("entry: aeroshell diameter must be positive");
  if (!(hypersonic_cd > 0.0)) throw ConfigError("entry: drag coefficient must be positive");
  if (!(entry_velocity_ms > 0.0)) throw ConfigError("entry: entry velocity must be positive");
  if (!(flight_path_angle_rad > -kPi / 2.0 && flight_path_angle_rad < 0.0)) {
    throw ConfigError("entry: flight path angle must lie in (-90, 0) deg");
  }
}

void ChuteConfig::validate() const {
  if (!(nominal_diameter_m > 0.0)) throw ConfigError("chute: nominal diameter must be positive");
  if (!(suspended_mass_kg > 0.0)) throw ConfigError("chute: suspended mass must be positive");
  if (!(drag_coefficient > 0.0)) throw ConfigError("chute: drag coefficient must be positive");
}

void SeparationModel::validate() const {
  if (!(beta_backshell > 0.0) || !(beta_vehicle > 0.0)) {
    throw ConfigError("separation: ballistic coefficients must be positive");
  }
}

std::string_view to_string(Mission mission) {
  switch (mission) {
    case Mission::pathfinder:
      return "pathfinder";
    case Mission::insight:
      return "insight";
    case Mission::mad:
      return "mad";
  }
  return "mad";
}

MissionPreset mission_preset(Mission mission) {
  MissionPreset p;
  p.name = std::string(to_string(mission));
  // Every scenario flies the same 2.65 m aeroshell and the 14 m MER-class DGB.
  switch (mission) {
    case Mission::pathfinder:
      p.entry.entry_mass_kg = 586.7;
      p.entry.entry_velocity_ms = 7260.0;
      p.entry.flight_path_angle_rad = deg2rad(-14.1);
      p.heatshield_mass_kg = 70.0;
      p.backshell_chute_mass_kg = 145.0;
      p.landed_mass_kg = 370.0;
      p.fpa_min_deg = p.fpa_max_deg = -14.1;
      p.reported_terminal_velocity_ms = 63.0;
      break;
    case Mission::insight:
      p.entry.entry_mass_kg = 625.0;
      p.entry.entry_velocity_ms = 6300.0;
      p.entry.flight_path_angle_rad = deg2rad(-12.0);
      p.heatshield_mass_kg = 74.4;
      p.backshell_chute_mass_kg = 115.6;
      p.landed_mass_kg = 384.0;
      p.fpa_min_deg = p.fpa_max_deg = -12.0;
      p.reported_terminal_velocity_ms = 63.0;
      break;
    case Mission::mad:
      p.entry.entry_mass_kg = 256.0;
      p.entry.entry_velocity_ms = 7300.0;
      p.entry.flight_path_angle_rad = deg2rad(-12.0);
      p.heatshield_mass_kg = 70.0;
      p.backshell_chute_mass_kg = 145.0;
      p.landed_mass_kg = 4.141;
      p.fpa_min_deg = -14.5;
      p.fpa_max_deg = -11.0;
      p.reported_terminal_velocity_ms = 30.0;
      break;
  }
  // What hangs under the chute after heatshield jettison.
  p.chute.suspended_mass_kg = p.backshell_chute_mass_kg + p.landed_mass_kg;
  return p;
}

MissionPreset mission_preset(std::string_view name) {
  for (auto m : {Mission::pathfinder, Mission::insight, Mission::mad}) {
    if (name == to_string(m)) {
      return mission_preset(m);
    }
  }
  throw ConfigError("unknown mission preset '" + std::string(name) + "'");
}

SeparationModel mad_separation_model() {
  const auto mission = mission_preset(Mission::mad);
  const double disk_area = kPi * 0.605 * 0.605;
  return SeparationModel{
      mission.backshell_chute_mass_kg / (mission.chute.drag_coefficient * mission.chute.nominal_area()),
      mission.landed_mass_kg / (kAutorotationDiskCd * disk_area)};
}

EntryResult simulate_entry(const EntryConfig& cfg, const atmosphere::AtmosphereModel& atm, double mach_trigger,
                           const EntryOptions& options) {
  cfg.validate();
  if (!(options.dt_s > 0.0)) {
    throw ConfigError("entry: dt must be positive");
  }
  const double area_over_mass = cfg.hypersonic_cd * cfg.reference_area() / cfg.entry_mass_kg;

  // State: radius, downrange angle, planet-relative speed, flight path angle.
  using State = std::array<double, 4>;
  const auto deriv = [&](const State& y) -> State {
    const double r = y[0];
    const double v = y[2];
    const double gamma = y[3];
    const double rho = atm.density(r - kMarsRadius);
    const double g = kMarsMu / (r * r);
    const double drag = 0.5 * rho * v * v * area_over_mass;
    return {v * std::sin(gamma), v * std::cos(gamma) / r, -drag - g * std::sin(gamma),
            (v / r - g / v) * std::cos(gamma)};
  };

  const auto make_row = [&](double t, const State& y) {
    LogRow row;
    row.t_s = t;
    row.phase = Phase::entry;
    row.altitude_m = y[0] - kMarsRadius;
    row.speed_ms = y[2];
    row.velocity_ms = Eigen::Vector3d(y[2] * std::cos(y[3]), 0.0, y[2] * std::sin(y[3]));
    row.mach = y[2] / atm.at(row.altitude_m).sound_speed_ms;
    return row;
  };

  EntryResult result;
  State y{kMarsRadius + cfg.entry_altitude_m, 0.0, cfg.entry_velocity_ms, cfg.flight_path_angle_rad};
  double t = 0.0;
  LogRow prev = make_row(t, y);
  State prev_state = y;
  result.log.append(prev);
  if (prev.mach <= mach_trigger) {
    result.trigger_reached = true;
    result.trigger_altitude_m = prev.altitude_m;
    result.trigger_speed_ms = prev.speed_ms;
    result.trigger_flight_path_angle_rad = y[3];
    return result;
  }

  const auto n_max = static_cast<long>(std::ceil(options.t_max_s / options.dt_s));
  for (long n = 1; n <= n_max; ++n) {
    y = rk4(y, options.dt_s, deriv);
    t = static_cast<double>(n) * options.dt_s;
    for (double v : y) {
      if (!std::isfinite(v)) {
        throw SimulationError("entry: non-finite state at t=" + std::to_string(t));
      }
    }
    const LogRow row = make_row(t, y);
    result.log.append(row);
    if (row.mach <= mach_trigger) {
      result.trigger_reached = true;
      result.trigger_time_s = sim::detect_event(result.log, {sim::TriggerKind::mach, mach_trigger, Phase::entry});
      const double w = (result.trigger_time_s - prev.t_s) / (row.t_s - prev.t_s);
      result.trigger_altitude_m = lerp(prev.altitude_m, row.altitude_m, w);
      result.trigger_speed_ms = lerp(prev.speed_ms, row.speed_ms, w);
      result.trigger_flight_path_angle_rad = lerp(prev_state[3], y[3], w);
      result.log.add_event(result.trigger_time_s, "chute_deploy");
      return result;
    }
    if (row.altitude_m <= options.ground_altitude_m) {
      result.log.add_event(t, "ground_impact");
      return result;
    }
    prev = row;
    prev_state = y;
  }
  return result;
}

double chute_terminal_velocity(const ChuteConfig& chute, double density_kgm3) {
  return std::sqrt(2.0 * chute.suspended_mass_kg * kMarsGravity /
                   (density_kgm3 * chute.drag_coefficient * chute.nominal_area()));
}

double chute_acceleration(const ChuteConfig& chute, double density_kgm3, double speed_ms) {
  return kMarsGravity - density_kgm3 * speed_ms * std::abs(speed_ms) * chute.drag_coefficient *
                            chute.nominal_area() / (2.0 * chute.suspended_mass_kg);
}

ChuteResult simulate_chute_descent(const ChuteConfig& chute, const atmosphere::AtmosphereModel& atm,
                                   const ChuteStart& start, double stop_altitude_m, const ChuteOptions& options) {
  chute.validate();
  if (!(options.dt_s > 0.0)) {
    throw ConfigError("chute: dt must be positive");
  }
  using State = std::array<double, 2>;  // altitude, downward speed
  const auto deriv = [&](const State& y) -> State {
    return {-y[1], chute_acceleration(chute, atm.density(y[0]), y[1])};
  };
  const auto make_row = [&](double t, const State& y) {
    LogRow row;
    row.t_s = t;
    row.phase = Phase::chute;
    row.altitude_m = y[0];
    row.speed_ms = std::abs(y[1]);
    row.velocity_ms = Eigen::Vector3d(0.0, 0.0, -y[1]);
    row.mach = row.speed_ms / atm.at(y[0]).sound_speed_ms;
    return row;
  };

  ChuteResult result;
  State y{start.altitude_m, start.speed_ms};
  LogRow prev = make_row(options.t0_s, y);
  result.log.append(prev);
  if (y[0] <= stop_altitude_m) {
    result.reached_stop = true;
    result.stop_time_s = options.t0_s;
    result.stop_speed_ms = y[1];
    return result;
  }
  const auto n_max = static_cast<long>(std::ceil(options.t_max_s / options.dt_s));
  for (long n = 1; n <= n_max; ++n) {
    y = rk4(y, options.dt_s, deriv);
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
      throw SimulationError("chute: non-finite state");
    }
    const LogRow row = make_row(options.t0_s + static_cast<double>(n) * options.dt_s, y);
    result.log.append(row);
    if (row.altitude_m <= stop_altitude_m) {
      result.reached_stop = true;
      const double w = (prev.altitude_m - stop_altitude_m) / (prev.altitude_m - row.altitude_m);
      result.stop_time_s = lerp(prev.t_s, row.t_s, w);
      result.stop_speed_ms = lerp(prev.speed_ms, row.speed_ms, w);
      return result;
    }
    prev = row;
  }
  return result;
}

double separation_clearance(const SeparationModel& sep, double v0_ms, double density_kgm3, double t_s) {
  sep.validate();
  if (!(t_s >= 0.0)) {
    throw ConfigError("separation_clearance: t must be non-negative");
  }
  if (t_s == 0.0) {
    return 0.0;
  }
  // Each body: fall distance and downward speed.
  using State = std::array<double, 2>;
  const auto body = [&](double beta) {
    return [beta, density_kgm3](const State& y) -> State {
      return {y[1], kMarsGravity - density_kgm3 * y[1] * std::abs(y[1]) / (2.0 * beta)};
    };
  };
  const auto n = static_cast<long>(std::ceil(t_s / 1e-3));
  const double dt = t_s / static_cast<double>(n);
  State backshell{0.0, v0_ms};
  State vehicle{0.0, v0_ms};
  const auto f_backshell = body(sep.beta_backshell);
  const auto f_vehicle = body(sep.beta_vehicle);
  for (long i = 0; i < n; ++i) {
    backshell = rk4(backshell, dt, f_backshell);
    vehicle = rk4(vehicle, dt, f_vehicle);
  }
  return vehicle[0] - backshell[0];
}

}  // namespace marsdrop::edl
