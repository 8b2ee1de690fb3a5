#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "marsdrop/rotor_aero.hpp"

namespace marsdrop {

enum class Phase { entry, chute, spin_up, released, hover };

[[nodiscard]] std::string_view to_string(Phase phase);

/// One logged sample. Rotor columns are zero while the rotorcraft is stowed.
struct LogRow {
  double t_s{};
  Phase phase{Phase::entry};
  double altitude_m{};
  Eigen::Vector3d velocity_ms{Eigen::Vector3d::Zero()};  ///< (east, north, up)
  double speed_ms{};
  double mach{};
  double alpha_deg{};
  double omega_rads{};
  double ct_sigma{};
  double q_aero_Nm{};
  double q_motor_Nm{};
  double vi_ms{};
  double vh_ms{};
  double vz_bar{};  ///< descent-positive, normalized by vh
  double vx_bar{};
  rotor_aero::Regime regime{rotor_aero::Regime::normal};
  double severity{};
};

struct LogEvent {
  double t_s{};
  std::string name;
};

/**
 * @brief Time-indexed record of a run.
 *
 * Rows have strictly increasing time. Events carry interpolated crossing
 * times and may fall between rows.
 */
class TrajectoryLog {
 public:
  /// Appends a row; throws std::logic_error if time does not strictly increase.
  void append(const LogRow& row);
  void add_event(double t_s, std::string name);

  [[nodiscard]] const std::vector<LogRow>& rows() const { return rows_; }
  [[nodiscard]] const std::vector<LogEvent>& events() const { return events_; }
  [[nodiscard]] bool empty() const { return rows_.empty(); }
  [[nodiscard]] std::size_t size() const { return rows_.size(); }
  [[nodiscard]] const LogRow& back() const { return rows_.back(); }
  [[nodiscard]] std::optional<double> event_time(std::string_view name) const;

  /// Appends all rows and events of `other` (rows with t not after the last row are skipped).
  void extend(const TrajectoryLog& other);

 private:
  std::vector<LogRow> rows_;
  std::vector<LogEvent> events_;
};

/// Full-schema CSV: every LogRow field, 17 significant digits.
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log);
/// EDL CSV: `t_s,altitude_m,speed_ms,mach,phase`.
void write_edl_csv(std::ostream& out, const TrajectoryLog& log);

/// Fixed 17-significant-digit formatting shared by the CSV writers.
[[nodiscard]] std::string format_double(double value);

}  // namespace marsdrop
