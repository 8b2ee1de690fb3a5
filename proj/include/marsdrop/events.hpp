#pragma once

#include <optional>

#include "marsdrop/trajectory_log.hpp"

namespace marsdrop::sim {

enum class TriggerKind { mach, altitude, speed };

struct Trigger {
  TriggerKind kind{TriggerKind::altitude};
  double threshold{};
  /// Only rows of this phase are inspected when set.
  std::optional<Phase> phase{};
};

/**
 * First crossing of the trigger threshold, linearly interpolated in time
 * between the bracketing rows. Throws NoCrossingError when the threshold is
 * not crossed within the inspected rows.
 */
[[nodiscard]] double detect_event(const TrajectoryLog& log, const Trigger& trigger);

}  // namespace marsdrop::sim
