#include <doctest.h>

#include <cmath>
#include <sstream>

#include "marsdrop/errors.hpp"
#include "marsdrop/sim.hpp"

using namespace marsdrop;
using namespace marsdrop::sim;
using vehicle::BodyState;
using vehicle::RotorCommand;
using vehicle::Vec3;

namespace {

atmosphere::AtmosphereModel uniform(double rho) {
  return atmosphere::AtmosphereModel::builtin_exponential(rho, 1e12, 210.0);
}

std::string csv_of(const TrajectoryLog& log) {
  std::ostringstream out;
  write_trajectory_csv(out, log);
  return out.str();
}

BodyState integrate(BodyState s, const RotorCommand& cmd, double dt, double t_end, const vehicle::VehicleConfig& v,
                    const atmosphere::AtmosphereModel& atm) {
  const auto n = static_cast<long>(std::lround(t_end / dt));
  for (long i = 0; i < n; ++i) {
    s = step(s, cmd, dt, v, atm);
  }
  return s;
}

}  // namespace

TEST_CASE("free fall gains 3.71 m/s per second") {
  auto v = vehicle::preset(vehicle::VehiclePreset::mad);
  v.fuselage_cd = 0.0;
  BodyState s;
  s.position_m.z() = 6000.0;
  const auto end = integrate(s, RotorCommand{}, 0.001, 1.0, v, uniform(0.01));
  CHECK(std::abs(end.velocity_ms.z() + 3.71) < 1e-9);
  CHECK(end.position_m.z() == doctest::Approx(6000.0 - 0.5 * 3.71).epsilon(1e-12));
}

TEST_CASE("trim hover holds position") {
  const auto v = vehicle::preset(vehicle::VehiclePreset::mad);
  const double rho = 0.01;
  const auto atm = uniform(rho);
  BodyState s;
  s.position_m.z() = 6000.0;
  s.omega_rads = v.rotor.omega_nominal_rads;
  const double tip = v.rotor.tip_speed(s.omega_rads);
  RotorCommand cmd;
  cmd.ct_sigma = v.weight() / (v.rotor.solidity * rho * v.rotor.disk_area() * tip * tip);
  const auto trim = vehicle::total_wrench(s, cmd, atm.at(6000.0), v);
  cmd.motor_torque_Nm = trim.aero_torque_Nm;
  const auto end = integrate(s, cmd, 0.001, 10.0, v, atm);
  CHECK((end.position_m - s.position_m).norm() < 1e-3);
  CHECK(end.omega_rads == doctest::Approx(s.omega_rads).epsilon(1e-9));
  CHECK(end.rotor_axis.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("halving the step changes a 10 s braking run by less than 1e-6") {
  auto v = vehicle::preset(vehicle::VehiclePreset::mad);
  v.rotor.omega_max_rads = 1000.0;
  const auto atm = atmosphere::AtmosphereModel::mars_default();
  BodyState s;
  s.position_m.z() = 6000.0;
  s.velocity_ms = Vec3(2.0, 0.0, -30.0);
  s.rotor_axis = Vec3(0.05, 0.0, 1.0).normalized();
  s.angular_rate_rads = Vec3(0.0, 0.02, 0.0);
  s.omega_rads = 280.0;
  RotorCommand cmd;
  cmd.ct_sigma = 0.161;
  cmd.motor_torque_Nm = 2.5;
  const auto a = integrate(s, cmd, 0.001, 10.0, v, atm);
  const auto b = integrate(s, cmd, 0.0005, 10.0, v, atm);
  const auto rel = [](double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); };
  CHECK(rel(a.position_m.z(), b.position_m.z()) < 1e-6);
  CHECK((a.velocity_ms - b.velocity_ms).norm() / b.velocity_ms.norm() < 1e-6);
  CHECK(rel(a.omega_rads, b.omega_rads) < 1e-6);
  CHECK((a.rotor_axis - b.rotor_axis).norm() < 1e-6);
}

TEST_CASE("rotor speed is clamped and axis stays unit") {
  const auto v = vehicle::preset(vehicle::VehiclePreset::mad);
  BodyState s;
  s.position_m.z() = 6000.0;
  s.omega_rads = 301.0;
  s.angular_rate_rads = Vec3(1.0, 2.0, 0.5);
  RotorCommand cmd;
  cmd.motor_torque_Nm = 4.41;
  const auto end = integrate(s, cmd, 0.001, 1.0, v, uniform(0.01));
  CHECK(end.omega_rads <= v.rotor.omega_max_rads);
  CHECK(end.rotor_axis.norm() == doctest::Approx(1.0).epsilon(1e-9));
  cmd.motor_torque_Nm = -4.41;
  CHECK(integrate(s, cmd, 0.001, 3.0, v, uniform(0.01)).omega_rads >= 0.0);
  CHECK_THROWS_AS((void)step(s, cmd, 0.0, v, uniform(0.01)), ConfigError);
}

TEST_CASE("default deployment reaches hover") {
  const MissionConfig cfg;
  const auto r = run_scenario(cfg);
  REQUIRE(r.status == RunStatus::complete);
  REQUIRE(r.altitude_loss_m.has_value());
  CHECK(*r.altitude_loss_m > 150.0);
  CHECK(*r.altitude_loss_m < 350.0);
  CHECK(*r.hover_altitude_m == doctest::Approx(6000.0 - *r.altitude_loss_m));
  CHECK(r.log.event_time("release").has_value());
  CHECK(r.log.event_time("hover").has_value());

  const double bound = cfg.vehicle.rotor.torque_max_Nm * cfg.vehicle.rotor.omega_max_rads;
  double prev_vz = 1e9;
  bool braking = true;
  for (const auto& row : r.log.rows()) {
    CHECK(std::abs(row.q_motor_Nm) * row.omega_rads <= bound);
    if (r.capture_time_s && row.t_s >= *r.capture_time_s) {
      braking = false;
    }
    if (braking) {
      CHECK(std::abs(row.velocity_ms.z()) <= prev_vz + 1e-9);
      prev_vz = std::abs(row.velocity_ms.z());
    }
  }
  // Hover phase appears once, after the released phase.
  bool seen_hover = false;
  for (const auto& row : r.log.rows()) {
    if (row.phase == Phase::hover) {
      seen_hover = true;
    } else {
      CHECK_FALSE(seen_hover);
    }
  }
  CHECK(seen_hover);
}

TEST_CASE("runs are bit-identical") {
  MissionConfig cfg;
  cfg.release.initial_speed_ms = 10.0;
  const auto a = run_scenario(cfg);
  const auto b = run_scenario(cfg);
  CHECK(csv_of(a.log) == csv_of(b.log));
  CHECK(a.log.events().size() == b.log.events().size());
}

TEST_CASE("release from rest hovers with little altitude loss") {
  MissionConfig cfg;
  cfg.release.initial_speed_ms = 0.0;
  const auto r = run_scenario(cfg);
  REQUIRE(r.status == RunStatus::complete);
  CHECK(*r.altitude_loss_m < 10.0);
  CHECK(*r.hover_time_s - *r.release_time_s < 1.0);
}

TEST_CASE("t_max before hover flags the run incomplete") {
  MissionConfig cfg;
  cfg.integrator.t_max_s = 2.0;
  const auto r = run_scenario(cfg);
  CHECK(r.status == RunStatus::incomplete);
  CHECK_FALSE(r.message.empty());
  CHECK_FALSE(r.altitude_loss_m.has_value());
}

TEST_CASE("chute-only mission stops at the release altitude") {
  MissionConfig cfg;
  cfg.chute = edl::ChuteConfig{};
  cfg.release_enabled = false;
  const auto r = run_scenario(cfg);
  REQUIRE(r.status == RunStatus::complete);
  CHECK(r.log.back().altitude_m == doctest::Approx(6000.0).epsilon(1e-3));
  REQUIRE(r.release_speed_ms.has_value());
  CHECK(*r.release_speed_ms == doctest::Approx(*r.chute_terminal_velocity_ms).epsilon(0.02));
}

TEST_CASE("full mission phases appear in order") {
  MissionConfig cfg;
  cfg.entry = edl::mission_preset(edl::Mission::mad).entry;
  cfg.chute = edl::mission_preset(edl::Mission::mad).chute;
  const auto r = run_scenario(cfg);
  REQUIRE(r.status == RunStatus::complete);
  CHECK(*r.mach2_altitude_m > 15000.0);
  const char* order[] = {"entry_interface", "chute_deploy", "spin_up_start", "release", "hover"};
  double prev = -1.0;
  for (const char* name : order) {
    const auto t = r.log.event_time(name);
    REQUIRE(t.has_value());
    CHECK(*t >= prev);
    prev = *t;
  }
  Phase last = Phase::entry;
  for (const auto& row : r.log.rows()) {
    CHECK(static_cast<int>(row.phase) >= static_cast<int>(last));
    last = row.phase;
  }
  CHECK(r.log.rows()[1].t_s > r.log.rows()[0].t_s);
}

TEST_CASE("mission validation") {
  MissionConfig cfg;
  cfg.integrator.dt_release_s = 0.0;
  CHECK_THROWS_AS((void)run_scenario(cfg), ConfigError);
  cfg = MissionConfig{};
  cfg.release.initial_alpha_rad = 2.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = MissionConfig{};
  cfg.guidance.margin = -0.1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
