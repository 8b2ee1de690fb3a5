#pragma once

#include <stdexcept>
#include <string>

namespace marsdrop {

/// Invalid configuration or input data (bad parameters, malformed tables, unknown presets).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulation produced a non-finite state and had to stop.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File system failure; the message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested threshold is never crossed in the inspected trajectory span.
class NoCrossingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace marsdrop
