#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Geometry>

#include "marsdrop/errors.hpp"
#include "marsdrop/vehicle.hpp"

using namespace marsdrop;
using namespace marsdrop::vehicle;

namespace {

atmosphere::Ambient still_air(double rho) {
  atmosphere::Ambient a;
  a.density_kgm3 = rho;
  a.temperature_K = 210.0;
  a.sound_speed_ms = std::sqrt(kCo2Gamma * kCo2GasConstant * 210.0);
  a.wind_ms = Vec3::Zero();
  return a;
}

}  // namespace

TEST_CASE("fuselage drag") {
  const VehicleConfig cfg;
  const Vec3 v(0.0, 0.0, -30.0);
  const Vec3 d = fuselage_drag(v, 0.01, cfg);
  CHECK(d.norm() == doctest::Approx(0.0706).epsilon(2e-3));
  CHECK(d.normalized().dot(v.normalized()) == doctest::Approx(-1.0));
  CHECK(fuselage_drag(Vec3::Zero(), 0.01, cfg).isZero());
  CHECK(fuselage_drag(2.0 * v, 0.01, cfg).norm() == doctest::Approx(4.0 * d.norm()).epsilon(1e-14));
  CHECK(cfg.base_area() == doctest::Approx(0.14 * 0.14).epsilon(1e-12));

  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 20.0);
  for (int i = 0; i < 100; ++i) {
    const Vec3 w(n(rng), n(rng), n(rng));
    CHECK(fuselage_drag(w, 0.01, cfg).dot(w) <= 0.0);
  }
}

TEST_CASE("hover trim gives zero net force") {
  const VehicleConfig cfg;
  const auto amb = still_air(0.01);
  BodyState s;
  s.omega_rads = 301.8;
  const double tip = cfg.rotor.tip_speed(s.omega_rads);
  RotorCommand cmd;
  cmd.ct_sigma = cfg.weight() / (cfg.rotor.solidity * 0.01 * cfg.rotor.disk_area() * tip * tip);
  const auto w = total_wrench(s, cmd, amb, cfg);
  CHECK(w.force_N.norm() <= 1e-9 * w.thrust_N);
  CHECK(w.thrust_N == doctest::Approx(cfg.weight()).epsilon(1e-12));
}

TEST_CASE("zero command and zero velocity leaves gravity only") {
  const VehicleConfig cfg;
  BodyState s;
  const auto w = total_wrench(s, RotorCommand{}, still_air(0.01), cfg);
  CHECK(w.force_N.x() == 0.0);
  CHECK(w.force_N.y() == 0.0);
  CHECK(w.force_N.z() / cfg.gross_mass_kg == -kMarsGravity);
  CHECK(w.torque_Nm.isZero());
}

TEST_CASE("full thrust at 30 m/s descent") {
  const VehicleConfig cfg;
  BodyState s;
  s.velocity_ms = Vec3(0.0, 0.0, -30.0);
  s.omega_rads = 301.8;
  RotorCommand cmd;
  cmd.ct_sigma = 0.161;
  const auto w = total_wrench(s, cmd, still_air(0.01), cfg);
  CHECK(w.force_N.z() == doctest::Approx(9.65).epsilon(2e-3));
  CHECK(w.force_N.z() / cfg.gross_mass_kg == doctest::Approx(2.33).epsilon(3e-3));
  CHECK(w.flow.vz_ms == doctest::Approx(-30.0));
  CHECK(w.flow.vx_ms == doctest::Approx(0.0));
  CHECK_FALSE(w.saturated);
}

TEST_CASE("wrench rotates with the scene") {
  const VehicleConfig cfg;
  std::mt19937_64 rng(19);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    BodyState s;
    s.velocity_ms = 15.0 * Vec3(n(rng), n(rng), n(rng));
    s.rotor_axis = Vec3(n(rng), n(rng), n(rng)).normalized();
    s.angular_rate_rads = Vec3(n(rng), n(rng), n(rng));
    s.omega_rads = 150.0 + 150.0 * u(rng);
    RotorCommand cmd;
    cmd.ct_sigma = 0.161 * u(rng);
    cmd.motor_torque_Nm = 2.0 * n(rng);
    cmd.attitude_torque_Nm = Vec3(n(rng), n(rng), n(rng));
    auto amb = still_air(0.01);
    amb.wind_ms = 5.0 * Vec3(n(rng), n(rng), n(rng));

    const Eigen::Matrix3d rot =
        Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng)).normalized().toRotationMatrix();
    BodyState rs = s;
    rs.velocity_ms = rot * s.velocity_ms;
    rs.rotor_axis = rot * s.rotor_axis;
    rs.angular_rate_rads = rot * s.angular_rate_rads;
    RotorCommand rc = cmd;
    rc.attitude_torque_Nm = rot * cmd.attitude_torque_Nm;
    auto ramb = amb;
    ramb.wind_ms = rot * amb.wind_ms;

    const auto w = total_wrench(s, cmd, amb, cfg);
    const auto rw = total_wrench(rs, rc, ramb, cfg, rot * Vec3::UnitZ());
    CHECK((rw.force_N - rot * w.force_N).norm() <= 1e-9 * (1.0 + w.force_N.norm()));
    CHECK((rw.torque_Nm - rot * w.torque_Nm).norm() <= 1e-9 * (1.0 + w.torque_Nm.norm()));
  }
}

TEST_CASE("reaction torque acts about the rotor axis") {
  const VehicleConfig cfg;
  BodyState s;
  s.omega_rads = 301.8;
  s.rotor_axis = Vec3(1.0, 0.0, 1.0).normalized();
  RotorCommand cmd;
  cmd.ct_sigma = 0.095;
  cmd.motor_torque_Nm = 3.0;
  const auto w = total_wrench(s, cmd, still_air(0.01), cfg);
  CHECK((w.torque_Nm - (3.0 - w.aero_torque_Nm) * s.rotor_axis).norm() < 1e-12);
}

TEST_CASE("vehicle presets") {
  CHECK(preset(VehiclePreset::mad).gross_mass_kg == 4.141);
  CHECK(preset("ingenuity").rotor.solidity == 0.148);
  CHECK(preset("advanced_mh").rotor.omega_nominal_rads == doctest::Approx(2943.0 * 2.0 * kPi / 60.0));
  CHECK(preset("mad").rotor.omega_nominal_rads == doctest::Approx(301.8).epsilon(1e-3));
  CHECK_THROWS_AS((void)preset("blimp"), ConfigError);
  for (auto p : {VehiclePreset::ingenuity, VehiclePreset::advanced_mh, VehiclePreset::mad}) {
    const auto cfg = preset(p);
    CHECK_NOTHROW(cfg.validate());
    CHECK(preset(to_string(p)).gross_mass_kg == cfg.gross_mass_kg);
  }
}

TEST_CASE("cube inertia and validation") {
  const auto cfg = preset(VehiclePreset::mad);
  CHECK(cfg.inertia(0, 0) == doctest::Approx(4.141 * 0.14 * 0.14 / 6.0).epsilon(1e-12));
  CHECK(cube_inertia(6.0, 1.0).isApprox(Eigen::Matrix3d::Identity()));

  VehicleConfig bad = cfg;
  bad.gross_mass_kg = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.inertia(0, 1) = 0.01;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.inertia(2, 2) = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
