#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thermsynth/network.hpp"

namespace thermsynth {

enum class ControllerKind { internal_p, two_point, external, none };
std::string_view controller_kind_name(ControllerKind kind);
ControllerKind parse_controller_kind(std::string_view name);

struct ControllerConfig {
  ControllerKind kind = ControllerKind::internal_p;
  double day_setpoint = 22.0;
  double night_setpoint = 18.0;
  double day_start_h = 6.0;
  double day_end_h = 22.0;
  double proportional_band = 2.0;  // K
  double hysteresis = 0.5;         // K
  double update_interval = 60.0;   // s
  std::string plugin;              // registered name, external kind only
};

/// Throws ConfigError for an invalid band, hysteresis or update interval.
void validate(const ControllerConfig& config, double dt);

/// Actuation. An empty window_open leaves the window to the opening profile.
struct ControlCommand {
  double u_heat = 0.0;
  double u_cool = 0.0;
  std::optional<double> window_open;

  bool operator==(const ControlCommand&) const = default;
};

double setpoint_at(const ControllerConfig& config, double time_s);

ControlCommand internal_p(const ControllerConfig& config, double t_air, double time_s);

ControlCommand two_point(const ControllerConfig& config, double t_air, double time_s,
                         const ControlCommand& previous);

/// What a controller sees at an update instant.
struct Observation {
  double time = 0.0;
  double t_air = 0.0;
  double t_out = 0.0;
  std::array<double, kSurfaceCount> irradiance{};
  ControlCommand last;
};

/// Controller contract; built-in and plug-in controllers implement it.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual ControlCommand on_update(const Observation& observation) = 0;
};

using ControllerFactory = std::function<std::unique_ptr<Controller>(const ControllerConfig&)>;

/// Registers an external controller under `name`, replacing any previous one.
void register_controller(const std::string& name, ControllerFactory factory);
std::vector<std::string> registered_controllers();

/// Built-in for internal_p/two_point/none, registry lookup for external.
std::unique_ptr<Controller> make_controller(const ControllerConfig& config);

/// Clamp every channel to [0, 1].
ControlCommand clamp_command(ControlCommand command);

/// Evaluates the controller only every update_interval and holds the last
/// command in between.
class HeldController {
 public:
  HeldController(std::unique_ptr<Controller> controller, double update_interval, double dt);

  /// Command for the step starting at `step_index`; `observe` is called only
  /// at update instants.
  template <typename ObserveFn>
  const ControlCommand& command(std::size_t step_index, ObserveFn&& observe) {
    if (step_index % steps_per_update_ == 0) {
      Observation obs = observe();
      obs.last = current_;
      current_ = clamp_command(controller_->on_update(obs));
      ++updates_;
    }
    return current_;
  }

  [[nodiscard]] std::size_t steps_per_update() const { return steps_per_update_; }
  [[nodiscard]] std::size_t updates() const { return updates_; }
  [[nodiscard]] const ControlCommand& current() const { return current_; }

 private:
  std::unique_ptr<Controller> controller_;
  std::size_t steps_per_update_ = 1;
  std::size_t updates_ = 0;
  ControlCommand current_;
};

/// Number of dt steps per update; throws ConfigError unless update_interval is a multiple of dt.
std::size_t steps_per_update(double update_interval, double dt);

}  // namespace thermsynth
