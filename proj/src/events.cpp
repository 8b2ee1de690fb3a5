#include "marsdrop/events.hpp"

#include <string>

#include "marsdrop/errors.hpp"

namespace marsdrop::sim {

namespace {

double value_of(const LogRow& row, TriggerKind kind) {
  switch (kind) {
    case TriggerKind::mach:
      return row.mach;
    case TriggerKind::altitude:
      return row.altitude_m;
    case TriggerKind::speed:
      return row.speed_ms;
  }
  return row.altitude_m;
}

const char* name_of(TriggerKind kind) {
  switch (kind) {
    case TriggerKind::mach:
      return "mach";
    case TriggerKind::altitude:
      return "altitude";
    case TriggerKind::speed:
      return "speed";
  }
  return "?";
}

}  // namespace

double detect_event(const TrajectoryLog& log, const Trigger& trigger) {
  const LogRow* prev = nullptr;
  for (const auto& row : log.rows()) {
    if (trigger.phase && row.phase != *trigger.phase) {
      continue;
    }
    const double d1 = value_of(row, trigger.kind) - trigger.threshold;
    if (d1 == 0.0) {
      return row.t_s;
    }
    if (prev != nullptr) {
      const double d0 = value_of(*prev, trigger.kind) - trigger.threshold;
      if ((d0 < 0.0) != (d1 < 0.0)) {
        const double w = d0 / (d0 - d1);
        return prev->t_s + w * (row.t_s - prev->t_s);
      }
    }
    prev = &row;
  }
  throw NoCrossingError(std::string("no ") + name_of(trigger.kind) + " crossing of " +
                        std::to_string(trigger.threshold) + " in trajectory");
}

}  // namespace marsdrop::sim
