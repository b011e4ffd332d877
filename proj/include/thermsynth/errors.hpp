#pragma once

#include <stdexcept>
#include <string>

namespace thermsynth {

/// Invalid user configuration. The message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (weather, profile CSV). The message carries the location.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure while assembling or advancing the thermal network.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace thermsynth
