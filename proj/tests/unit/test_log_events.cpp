#include <doctest.h>

#include <sstream>
#include <stdexcept>

#include "marsdrop/edl.hpp"
#include "marsdrop/errors.hpp"
#include "marsdrop/events.hpp"
#include "marsdrop/trajectory_log.hpp"

using namespace marsdrop;
using sim::detect_event;
using sim::Trigger;
using sim::TriggerKind;

namespace {

TrajectoryLog linear_descent() {
  TrajectoryLog log;
  for (int i = 0; i <= 10; ++i) {
    LogRow r;
    r.t_s = i;
    r.phase = Phase::chute;
    r.altitude_m = 6100.0 - 30.0 * i;
    r.speed_ms = 30.0;
    log.append(r);
  }
  return log;
}

}  // namespace

TEST_CASE("log rejects non-increasing time") {
  TrajectoryLog log;
  LogRow r;
  r.t_s = 1.0;
  log.append(r);
  CHECK_THROWS_AS(log.append(r), std::logic_error);
  r.t_s = 0.5;
  CHECK_THROWS_AS(log.append(r), std::logic_error);
  CHECK(log.size() == 1);
}

TEST_CASE("events and extension") {
  TrajectoryLog a = linear_descent();
  a.add_event(2.5, "chute_deploy");
  CHECK(a.event_time("chute_deploy") == doctest::Approx(2.5));
  CHECK_FALSE(a.event_time("hover").has_value());

  TrajectoryLog b;
  LogRow r;
  r.t_s = 5.0;
  b.append(r);
  r.t_s = 11.0;
  b.append(r);
  b.add_event(11.0, "release");
  a.extend(b);
  CHECK(a.size() == 12);
  CHECK(a.back().t_s == 11.0);
  CHECK(a.events().size() == 2);
}

TEST_CASE("altitude trigger interpolates between rows") {
  const auto log = linear_descent();
  const double t = detect_event(log, {TriggerKind::altitude, 6000.0});
  CHECK(t == doctest::Approx(100.0 / 30.0).epsilon(1e-14));
  CHECK(detect_event(log, {TriggerKind::altitude, 6010.0}) == doctest::Approx(3.0));
}

TEST_CASE("altitude trigger on a simulated chute descent is within one step") {
  const auto atm = atmosphere::AtmosphereModel::mars_default();
  edl::ChuteOptions opt;
  opt.dt_s = 0.1;
  const auto r = edl::simulate_chute_descent(edl::ChuteConfig{}, atm, {7000.0, 40.0}, 5000.0, opt);
  const double t = detect_event(r.log, {TriggerKind::altitude, 6000.0});
  // Reference crossing from a much finer run.
  opt.dt_s = 0.001;
  const auto fine = edl::simulate_chute_descent(edl::ChuteConfig{}, atm, {7000.0, 40.0}, 6000.0, opt);
  CHECK(std::abs(t - fine.stop_time_s) < 0.1);
}

TEST_CASE("no crossing raises") {
  const auto log = linear_descent();
  CHECK_THROWS_AS((void)detect_event(log, {TriggerKind::altitude, 9000.0}), NoCrossingError);
  CHECK_THROWS_AS((void)detect_event(log, {TriggerKind::speed, 10.0}), NoCrossingError);
  CHECK_THROWS_AS((void)detect_event(log, {TriggerKind::altitude, 6000.0, Phase::hover}), NoCrossingError);
  CHECK_THROWS_AS((void)detect_event(TrajectoryLog{}, {TriggerKind::mach, 2.0}), NoCrossingError);
}

TEST_CASE("mach trigger on the MAD entry lies above 15 km") {
  const auto r = edl::simulate_entry(edl::mission_preset(edl::Mission::mad).entry,
                                     atmosphere::AtmosphereModel::mars_default());
  const double t = detect_event(r.log, {TriggerKind::mach, 2.0, Phase::entry});
  CHECK(t == doctest::Approx(r.trigger_time_s));
  CHECK(r.trigger_altitude_m > 15000.0);
}

TEST_CASE("CSV writers") {
  auto log = linear_descent();
  std::ostringstream edl;
  write_edl_csv(edl, log);
  std::istringstream in(edl.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t_s,altitude_m,speed_ms,mach,phase");
  std::string first;
  std::getline(in, first);
  CHECK(first == "0,6100,30,0,chute");

  std::ostringstream full;
  write_trajectory_csv(full, log);
  std::size_t lines = 0;
  for (char c : full.str()) {
    lines += c == '\n';
  }
  CHECK(lines == log.size() + 1);
  CHECK(format_double(0.1) == "0.10000000000000001");
}
