#include "marsdrop/trajectory_log.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace marsdrop {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::entry:
      return "entry";
    case Phase::chute:
      return "chute";
    case Phase::spin_up:
      return "spin_up";
    case Phase::released:
      return "released";
    case Phase::hover:
      return "hover";
  }
  return "entry";
}

void TrajectoryLog::append(const LogRow& row) {
  if (!rows_.empty() && !(row.t_s > rows_.back().t_s)) {
    throw std::logic_error("TrajectoryLog: time must strictly increase");
  }
  rows_.push_back(row);
}

void TrajectoryLog::add_event(double t_s, std::string name) { events_.push_back({t_s, std::move(name)}); }

std::optional<double> TrajectoryLog::event_time(std::string_view name) const {
  for (const auto& e : events_) {
    if (e.name == name) {
      return e.t_s;
    }
  }
  return std::nullopt;
}

void TrajectoryLog::extend(const TrajectoryLog& other) {
  for (const auto& row : other.rows_) {
    if (rows_.empty() || row.t_s > rows_.back().t_s) {
      rows_.push_back(row);
    }
  }
  events_.insert(events_.end(), other.events_.begin(), other.events_.end());
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log) {
  out << "t_s,phase,altitude_m,vel_east_ms,vel_north_ms,vel_up_ms,speed_ms,mach,alpha_deg,omega_rads,"
         "ct_sigma,q_aero_Nm,q_motor_Nm,vi_ms,vh_ms,vz_bar,vx_bar,regime,severity\n";
  for (const auto& r : log.rows()) {
    out << format_double(r.t_s) << ',' << to_string(r.phase) << ',' << format_double(r.altitude_m) << ','
        << format_double(r.velocity_ms.x()) << ',' << format_double(r.velocity_ms.y()) << ','
        << format_double(r.velocity_ms.z()) << ',' << format_double(r.speed_ms) << ',' << format_double(r.mach)
        << ',' << format_double(r.alpha_deg) << ',' << format_double(r.omega_rads) << ','
        << format_double(r.ct_sigma) << ',' << format_double(r.q_aero_Nm) << ',' << format_double(r.q_motor_Nm)
        << ',' << format_double(r.vi_ms) << ',' << format_double(r.vh_ms) << ',' << format_double(r.vz_bar)
        << ',' << format_double(r.vx_bar) << ',' << rotor_aero::to_string(r.regime) << ','
        << format_double(r.severity) << '\n';
  }
}

void write_edl_csv(std::ostream& out, const TrajectoryLog& log) {
  out << "t_s,altitude_m,speed_ms,mach,phase\n";
  for (const auto& r : log.rows()) {
    out << format_double(r.t_s) << ',' << format_double(r.altitude_m) << ',' << format_double(r.speed_ms) << ','
        << format_double(r.mach) << ',' << to_string(r.phase) << '\n';
  }
}

}  // namespace marsdrop
