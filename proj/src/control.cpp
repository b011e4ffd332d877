#include "thermsynth/control.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "thermsynth/errors.hpp"

namespace thermsynth {

std::string_view controller_kind_name(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::internal_p: return "internal_p";
    case ControllerKind::two_point: return "two_point";
    case ControllerKind::external: return "external";
    case ControllerKind::none: return "none";
  }
  return "?";
}

ControllerKind parse_controller_kind(std::string_view name) {
  if (name == "internal_p") return ControllerKind::internal_p;
  if (name == "two_point") return ControllerKind::two_point;
  if (name == "external") return ControllerKind::external;
  if (name == "none") return ControllerKind::none;
  throw ConfigError("invalid value for control.kind: '" + std::string(name) +
                    "' (expected internal_p, two_point, external or none)");
}

std::size_t steps_per_update(double update_interval, double dt) {
  if (!(dt > 0.0) || !(update_interval >= dt)) {
    throw ConfigError("invalid value for control.update_interval: must be >= simulation dt");
  }
  const double ratio = update_interval / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9) {
    throw ConfigError("invalid value for control.update_interval: must be a multiple of dt");
  }
  return static_cast<std::size_t>(std::llround(ratio));
}

void validate(const ControllerConfig& c, double dt) {
  if (!(c.proportional_band > 0.0)) {
    throw ConfigError("invalid value for control.proportional_band: must be > 0");
  }
  if (!(c.hysteresis >= 0.0)) throw ConfigError("invalid value for control.hysteresis: must be >= 0");
  if (!(c.day_start_h >= 0.0 && c.day_start_h <= 24.0 && c.day_end_h >= 0.0 &&
        c.day_end_h <= 24.0)) {
    throw ConfigError("invalid value for control.day_start_h/day_end_h: must lie in [0, 24]");
  }
  steps_per_update(c.update_interval, dt);
  if (c.kind == ControllerKind::external && c.plugin.empty()) {
    throw ConfigError("control.plugin is required for an external controller");
  }
}

double setpoint_at(const ControllerConfig& c, double time_s) {
  const double hour = std::fmod(std::fmod(time_s, 86400.0) + 86400.0, 86400.0) / 3600.0;
  const bool day = c.day_start_h <= c.day_end_h
                       ? hour >= c.day_start_h && hour < c.day_end_h
                       : hour >= c.day_start_h || hour < c.day_end_h;
  return day ? c.day_setpoint : c.night_setpoint;
}

ControlCommand internal_p(const ControllerConfig& c, double t_air, double time_s) {
  ControlCommand cmd;
  cmd.u_heat = std::clamp((setpoint_at(c, time_s) - t_air) / c.proportional_band, 0.0, 1.0);
  return cmd;
}

ControlCommand two_point(const ControllerConfig& c, double t_air, double time_s,
                         const ControlCommand& previous) {
  const double set = setpoint_at(c, time_s);
  ControlCommand cmd;
  if (t_air < set - c.hysteresis) {
    cmd.u_heat = 1.0;
  } else if (t_air > set + c.hysteresis) {
    cmd.u_heat = 0.0;
  } else {
    cmd.u_heat = previous.u_heat > 0.0 ? 1.0 : 0.0;
  }
  return cmd;
}

ControlCommand clamp_command(ControlCommand cmd) {
  const auto clamp01 = [](double x) { return std::isnan(x) ? 0.0 : std::clamp(x, 0.0, 1.0); };
  cmd.u_heat = clamp01(cmd.u_heat);
  cmd.u_cool = clamp01(cmd.u_cool);
  if (cmd.window_open) cmd.window_open = clamp01(*cmd.window_open);
  return cmd;
}

namespace {

class InternalP final : public Controller {
 public:
  explicit InternalP(ControllerConfig c) : config_(std::move(c)) {}
  ControlCommand on_update(const Observation& o) override {
    return internal_p(config_, o.t_air, o.time);
  }

 private:
  ControllerConfig config_;
};

class TwoPoint final : public Controller {
 public:
  explicit TwoPoint(ControllerConfig c) : config_(std::move(c)) {}
  ControlCommand on_update(const Observation& o) override {
    return two_point(config_, o.t_air, o.time, o.last);
  }

 private:
  ControllerConfig config_;
};

class Off final : public Controller {
 public:
  ControlCommand on_update(const Observation&) override { return {}; }
};

/// Proportional heating plus a fully opened window 08:00–08:30 and 18:00–18:30.
class WindowHours final : public Controller {
 public:
  explicit WindowHours(ControllerConfig c) : config_(std::move(c)) {}
  ControlCommand on_update(const Observation& o) override {
    ControlCommand cmd = internal_p(config_, o.t_air, o.time);
    const double minute = std::fmod(o.time, 86400.0) / 60.0;
    const bool airing = (minute >= 480 && minute < 510) || (minute >= 1080 && minute < 1110);
    cmd.window_open = airing ? 1.0 : 0.0;
    return cmd;
  }

 private:
  ControllerConfig config_;
};

struct Registry {
  std::mutex mutex;
  std::map<std::string, ControllerFactory> factories;

  Registry() {
    factories["constant_off"] = [](const ControllerConfig&) { return std::make_unique<Off>(); };
    factories["internal_p"] = [](const ControllerConfig& c) {
      return std::make_unique<InternalP>(c);
    };
    factories["two_point"] = [](const ControllerConfig& c) {
      return std::make_unique<TwoPoint>(c);
    };
    factories["window_hours"] = [](const ControllerConfig& c) {
      return std::make_unique<WindowHours>(c);
    };
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

void register_controller(const std::string& name, ControllerFactory factory) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.factories[name] = std::move(factory);
}

std::vector<std::string> registered_controllers() {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  std::vector<std::string> names;
  for (const auto& [name, _] : r.factories) names.push_back(name);
  return names;
}

std::unique_ptr<Controller> make_controller(const ControllerConfig& c) {
  switch (c.kind) {
    case ControllerKind::internal_p: return std::make_unique<InternalP>(c);
    case ControllerKind::two_point: return std::make_unique<TwoPoint>(c);
    case ControllerKind::none: return std::make_unique<Off>();
    case ControllerKind::external: break;
  }
  ControllerFactory factory;
  {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    const auto it = r.factories.find(c.plugin);
    if (it == r.factories.end()) {
      throw ConfigError("invalid value for control.plugin: no controller registered as '" +
                        c.plugin + "'");
    }
    factory = it->second;
  }
  return factory(c);
}

HeldController::HeldController(std::unique_ptr<Controller> controller, double update_interval,
                               double dt)
    : controller_(std::move(controller)), steps_per_update_(thermsynth::steps_per_update(update_interval, dt)) {}

}  // namespace thermsynth
