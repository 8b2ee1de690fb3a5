#include <doctest.h>

#include <array>
#include <cmath>

#include "marsdrop/control.hpp"
#include "marsdrop/vehicle.hpp"
#include "oracles/oracles.hpp"

using namespace marsdrop;
using namespace marsdrop::control;

namespace {

struct PitchRun {
  std::vector<double> t;
  std::vector<double> alpha;
};

// Rigid single-axis pitch response I a'' = u(a, a') integrated with RK4.
PitchRun pitch_step(const PdAttitudeController& pd, double inertia, double alpha0, double t_end, double dt) {
  using S = std::array<double, 2>;
  const auto f = [&](const S& y) -> S { return {y[1], pd.torque(y[0], y[1]) / inertia}; };
  PitchRun run;
  S y{alpha0, 0.0};
  const auto n = static_cast<int>(std::lround(t_end / dt));
  for (int i = 0; i <= n; ++i) {
    run.t.push_back(i * dt);
    run.alpha.push_back(y[0]);
    const S k1 = f(y);
    const S k2 = f({y[0] + 0.5 * dt * k1[0], y[1] + 0.5 * dt * k1[1]});
    const S k3 = f({y[0] + 0.5 * dt * k2[0], y[1] + 0.5 * dt * k2[1]});
    const S k4 = f({y[0] + dt * k3[0], y[1] + dt * k3[1]});
    for (int j = 0; j < 2; ++j) {
      y[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
  }
  return run;
}

}  // namespace

TEST_CASE("PI feedforward and saturation") {
  const rotor_aero::RotorParams rotor;
  auto pi = PiTorqueController::for_rotor(rotor, 301.8);
  CHECK(pi.step(301.8, 1.851, 0.001) == doctest::Approx(1.851).epsilon(1e-15));
  CHECK(pi.step(301.8, 0.0, 0.001) == 0.0);
  CHECK(pi.step(100.0, 1.851, 0.001) == 4.41);
  CHECK(pi.step(400.0, 1.851, 0.001) == -4.41);
  CHECK(pi.kp() == doctest::Approx(rotor.rotor_inertia() / 0.2));
  CHECK(pi.ki() == doctest::Approx(pi.kp()));
  // Two rotors of 0.0342 kg m^2 each.
  CHECK(rotor.rotor_inertia() == doctest::Approx(2.0 * 0.0342).epsilon(3e-3));
}

TEST_CASE("PI anti-windup bounds the integral and releases the rail") {
  const rotor_aero::RotorParams rotor;
  auto pi = PiTorqueController::for_rotor(rotor, 301.8);
  for (int i = 0; i < 100000; ++i) {
    CHECK(std::abs(pi.step(150.0, 0.0, 0.001)) <= 4.41);
    REQUIRE(std::abs(pi.integral()) <= pi.integral_cap() + 1e-12);
  }
  int steps = 0;
  double out = 4.41;
  while (out >= 4.41 && steps < 100) {
    out = pi.step(301.9, 0.0, 0.001);
    ++steps;
  }
  CHECK(out < 4.41);
  CHECK(steps < 100);
}

TEST_CASE("PI loop drives rotor speed to the command") {
  const rotor_aero::RotorParams rotor;
  auto pi = PiTorqueController::for_rotor(rotor, 301.8);
  const double inertia = rotor.rotor_inertia();
  double omega = 280.0;
  const double q_aero = 1.85;
  for (int i = 0; i < 10000; ++i) {
    const double qm = pi.step(omega, q_aero, 0.001);
    omega += 0.001 * (qm - q_aero) / inertia;
  }
  CHECK(omega == doctest::Approx(301.8).epsilon(1e-4));
}

TEST_CASE("PD zero error and damping sign") {
  const auto pd = PdAttitudeController::critically_damped(0.0135);
  CHECK(pd.torque(kPi / 2.0, 0.0) == 0.0);
  CHECK(pd.torque(kPi / 2.0, 0.3) < 0.0);
  CHECK(pd.torque(kPi / 2.0, -0.3) > 0.0);
  const Vec3 axis = Vec3::UnitY();
  CHECK(pd.step(kPi / 2.0, 0.0, axis, 0.001).isZero());
  CHECK(pd.step(1.4, 0.0, axis, 0.001).dot(axis) > 0.0);
  CHECK(pd.kp() == doctest::Approx(0.0135 * 9.0));
  CHECK(pd.kd() == doctest::Approx(2.0 * 0.0135 * 3.0));
}

TEST_CASE("PD step response is critically damped and settles within 2 s") {
  const double inertia = vehicle::preset(vehicle::VehiclePreset::mad).inertia(1, 1);
  const auto pd = PdAttitudeController::critically_damped(inertia);
  const double a0 = deg2rad(80.0);
  const double e0 = kPi / 2.0 - a0;
  const auto run = pitch_step(pd, inertia, a0, 4.0, 1e-3);
  double peak = 0.0;
  double settle = 0.0;
  for (std::size_t i = 0; i < run.t.size(); ++i) {
    const double err = kPi / 2.0 - run.alpha[i];
    CHECK(err == doctest::Approx(oracle::critically_damped_error(e0, 3.0, run.t[i])).epsilon(1e-9).scale(e0));
    peak = std::max(peak, run.alpha[i] - kPi / 2.0);
    if (std::abs(err) > 0.02 * e0) {
      settle = run.t[i];
    }
  }
  CHECK(peak / e0 < 0.10);
  CHECK(settle < 2.0);
}

TEST_CASE("axis tracking torque") {
  const auto pd = PdAttitudeController::critically_damped(0.0135);
  const Vec3 up = Vec3::UnitZ();
  CHECK(pd.track_axis(up, up, Vec3::Zero()).isZero());
  const Vec3 tilted = Vec3(std::sin(0.2), 0.0, std::cos(0.2));
  const Vec3 tau = pd.track_axis(tilted, up, Vec3::Zero());
  // Rotation about the torque direction moves the axis toward the target.
  CHECK(tau.cross(tilted).dot(up - tilted) > 0.0);
  CHECK(tau.norm() == doctest::Approx(pd.kp() * 0.2).epsilon(1e-12));
  const Vec3 rate(0.1, -0.4, 0.2);
  CHECK((pd.track_axis(up, up, rate) + pd.kd() * rate).norm() < 1e-15);
}

TEST_CASE("angle of attack and commanded axis") {
  const Vec3 up = Vec3::UnitZ();
  CHECK(angle_of_attack(Vec3(0, 0, -30), up) == doctest::Approx(kPi / 2.0));
  CHECK(angle_of_attack(Vec3(30, 0, 0), up) == doctest::Approx(0.0));
  CHECK(angle_of_attack(Vec3::Zero(), up) == doctest::Approx(kPi / 2.0));
  for (double a_deg : {90.0, 60.0, 36.0, 10.0}) {
    for (const Vec3& v : {Vec3(0, 0, -30), Vec3(10, 0, -20), Vec3(-5, 3, -8)}) {
      const Vec3 n = commanded_axis(v, deg2rad(a_deg), up);
      CHECK(n.norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(angle_of_attack(v, n) == doctest::Approx(deg2rad(a_deg)).epsilon(1e-9));
      CHECK(n.dot(up) >= -1e-12);
    }
  }
  CHECK(commanded_axis(Vec3(0.1, 0, -0.1), 0.5, up) == up);
}

TEST_CASE("fixed schedule") {
  const auto s = AlphaSchedule::fixed();
  CHECK(s.alpha_at(1.16) == doctest::Approx(kPi / 2.0));
  CHECK(s.braking_alpha() == doctest::Approx(kPi / 2.0));
  CHECK(s.capture_speed_ratio == 1.0);
  CHECK_FALSE(s.flagged);
}

TEST_CASE("planner from rest returns axial descent") {
  const rotor_aero::RotorParams rotor;
  const auto s = plan_alpha_schedule(0.0, 25.84, 0.0, rotor);
  CHECK(s.braking_alpha() == doctest::Approx(kPi / 2.0));
  CHECK(s.predicted_altitude_loss_m == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_FALSE(s.flagged);
}

TEST_CASE("planner at the release point avoids VRS at a cost") {
  const rotor_aero::RotorParams rotor;
  const double vh = 25.84;
  const double v0 = 1.16 * vh;
  const auto s = plan_alpha_schedule(v0, vh, 0.0, rotor);
  CHECK(s.reference_crosses_vrs);
  CHECK_FALSE(s.flagged);
  CHECK(s.braking_alpha() < kPi / 2.0);
  CHECK(s.predicted_altitude_loss_m > s.reference_altitude_loss_m);
  for (std::size_t i = 1; i < s.entries.size(); ++i) {
    CHECK(s.entries[i].trigger_speed_ratio < s.entries[i - 1].trigger_speed_ratio);
  }
  for (const auto& e : s.entries) {
    CHECK(e.alpha_rad >= 0.0);
    CHECK(e.alpha_rad <= kPi / 2.0 + 1e-12);
  }

  double prev = s.braking_alpha();
  for (double margin : {0.1, 0.2}) {
    const auto m = plan_alpha_schedule(v0, vh, margin, rotor);
    CHECK(m.braking_alpha() <= prev + 1e-12);
    prev = m.braking_alpha();
  }
}

TEST_CASE("returned schedules are safe when re-simulated") {
  const rotor_aero::RotorParams rotor;
  const double vh = 25.84;
  for (double margin : {0.0, 0.2}) {
    const auto s = plan_alpha_schedule(1.16 * vh, vh, margin, rotor);
    REQUIRE_FALSE(s.flagged);
    const auto c = simulate_constant_alpha(1.16 * vh, vh, s.braking_alpha(), margin, rotor, {}, true);
    CHECK(c.reached_capture);
    CHECK_FALSE(c.crosses_region);
    for (const auto& p : c.path) {
      CHECK(rotor_aero::vrs_classify_inflated(p.vx_bar, p.vz_bar, margin, rotor).regime != rotor_aero::Regime::vrs);
    }
  }
}
