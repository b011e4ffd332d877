#include "thermsynth/simulation.hpp"

#include <cmath>
#include <string>

#include "thermsynth/errors.hpp"

namespace thermsynth {

namespace {

constexpr std::array<std::string_view, kColumnCount> kColumnNames{
    "time_s",        "t_air_c",       "t_out_c",       "q_heat_w",
    "q_cool_w",      "u_heat",        "u_cool",        "window_open",
    "gains_w",       "sol_dir_s_wm2", "sol_dir_w_wm2", "sol_dir_n_wm2",
    "sol_dir_e_wm2", "sol_dir_roof_wm2", "sol_dif_wm2", "ach_effective"};

std::size_t exact_ratio(double numerator, double denominator, std::string_view key) {
  const double ratio = numerator / denominator;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0 - 1e-9) {
    throw ConfigError("invalid value for simulation." + std::string(key) +
                      ": must be a positive multiple of dt");
  }
  return static_cast<std::size_t>(std::llround(ratio));
}

StepInputs boundary_inputs(const RunInputs& in, double t_begin, double t_end) {
  StepInputs s;
  s.outdoor_temperature = sample(*in.weather, t_end).outdoor_temperature;
  s.irradiance = irradiance_over(*in.weather, t_begin);
  s.internal_gains = in.gains != nullptr ? in.gains->gains_at(t_begin) : 0.0;
  s.window_open = in.window != nullptr ? in.window->window_at(t_begin) : 0.0;
  return s;
}

}  // namespace

void validate(const SimulationSettings& s) {
  if (!(s.dt > 0.0)) throw ConfigError("invalid value for simulation.dt: must be > 0");
  if (!(s.stop > s.start)) throw ConfigError("invalid value for simulation.stop: must exceed start");
  if (!(s.start >= 0.0) || !(s.stop <= kYearSeconds)) {
    throw ConfigError("invalid value for simulation.stop: horizon must lie within one year");
  }
  exact_ratio(s.output_interval, s.dt, "output_interval");
  exact_ratio(s.stop - s.start, s.dt, "stop");
}

std::span<const std::string_view> column_names() { return kColumnNames; }

OutputColumn parse_column(std::string_view name) {
  for (std::size_t i = 0; i < kColumnCount; ++i) {
    if (kColumnNames[i] == name) return static_cast<OutputColumn>(i);
  }
  throw ConfigError("unknown column " + std::string(name));
}

std::vector<double> SimulationTrace::column(OutputColumn c) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[static_cast<std::size_t>(c)]);
  return out;
}

ZoneState warm_start(const ThermalNetwork& net, const ControllerConfig& control,
                     const RunInputs& inputs, const SimulationSettings& settings) {
  StepInputs first = boundary_inputs(inputs, settings.start, settings.start);
  first.outdoor_temperature = sample(*inputs.weather, settings.start).outdoor_temperature;
  ZoneState state = steady_state(net, first);
  if (control.kind != ControllerKind::none) {
    const double set = setpoint_at(control, settings.start);
    if (state.air() < set) state = steady_state_pinned_air(net, first, set);
  }
  state.time = settings.start;
  return state;
}

SimulationResult simulate(const ModelParams& params, const ControllerConfig& control,
                          const RunInputs& inputs, const SimulationSettings& settings,
                          std::unique_ptr<Controller> controller) {
  validate(settings);
  validate(control, settings.dt);
  if (inputs.weather == nullptr) throw SimulationError("no weather series");
  if (static_cast<double>(inputs.weather->hours()) * 3600.0 < settings.stop) {
    throw SimulationError("weather series shorter than horizon");
  }
  if (inputs.gains != nullptr) require_horizon(*inputs.gains, settings.stop);
  if (inputs.window != nullptr) require_horizon(*inputs.window, settings.stop);

  const ThermalNetwork net = assemble_network(params);
  Integrator integrator(net, settings.dt);
  HeldController held(controller ? std::move(controller) : make_controller(control),
                      control.update_interval, settings.dt);

  const std::size_t steps = exact_ratio(settings.stop - settings.start, settings.dt, "stop");
  const std::size_t output_every = exact_ratio(settings.output_interval, settings.dt, "output_interval");

  SimulationResult result;
  result.trace.rows.reserve(steps / output_every + 1);
  ZoneState state = warm_start(net, control, inputs, settings);

  double residual_sum = 0.0;
  double gross_sum = 0.0;
  OutputRow row{};
  for (std::size_t k = 0; k < steps; ++k) {
    const double t0 = settings.start + static_cast<double>(k) * settings.dt;
    const double t1 = settings.start + static_cast<double>(k + 1) * settings.dt;

    StepInputs step_inputs = boundary_inputs(inputs, t0, t1);
    const ControlCommand& cmd = held.command(k, [&] {
      Observation obs;
      obs.time = t0;
      obs.t_air = state.air();
      obs.t_out = sample(*inputs.weather, t0).outdoor_temperature;
      obs.irradiance = step_inputs.irradiance;
      return obs;
    });
    step_inputs.heat_command = cmd.u_heat;
    step_inputs.cool_command = cmd.u_cool;
    if (cmd.window_open) step_inputs.window_open = *cmd.window_open;

    StepResult next = integrator.advance(state, step_inputs);

    const double gross = next.ledger.gross();
    const double residual = next.ledger.residual();
    if (gross > 0.0) {
      result.max_step_residual = std::max(result.max_step_residual, std::abs(residual) / gross);
    }
    residual_sum += residual;
    gross_sum += gross;
    result.totals += next.ledger;

    if (k % output_every == 0 || k + 1 == steps) {
      const WeatherSample ws = sample(*inputs.weather, t0);
      row[static_cast<std::size_t>(OutputColumn::t_out_c)] = ws.outdoor_temperature;
      row[static_cast<std::size_t>(OutputColumn::q_heat_w)] = next.heat_power;
      row[static_cast<std::size_t>(OutputColumn::q_cool_w)] = next.cool_power;
      row[static_cast<std::size_t>(OutputColumn::u_heat)] = cmd.u_heat;
      row[static_cast<std::size_t>(OutputColumn::u_cool)] = cmd.u_cool;
      row[static_cast<std::size_t>(OutputColumn::window_open)] = step_inputs.window_open;
      row[static_cast<std::size_t>(OutputColumn::gains_w)] = step_inputs.internal_gains;
      for (std::size_t s = 0; s < kSurfaceCount; ++s) {
        row[static_cast<std::size_t>(OutputColumn::sol_dir_s_wm2) + s] = ws.direct[s];
      }
      row[static_cast<std::size_t>(OutputColumn::sol_dif_wm2)] = ws.diffuse_horizontal;
      row[static_cast<std::size_t>(OutputColumn::ach_effective)] = next.ach_effective;
      if (k % output_every == 0) {
        row[static_cast<std::size_t>(OutputColumn::time_s)] = t0;
        row[static_cast<std::size_t>(OutputColumn::t_air_c)] = state.air();
        result.trace.rows.push_back(row);
      }
    }
    state = std::move(next.state);
  }
  // Final instant: state at stop, inputs of the last interval.
  row[static_cast<std::size_t>(OutputColumn::time_s)] = settings.stop;
  row[static_cast<std::size_t>(OutputColumn::t_air_c)] = state.air();
  row[static_cast<std::size_t>(OutputColumn::t_out_c)] =
      sample(*inputs.weather, settings.stop).outdoor_temperature;
  result.trace.rows.push_back(row);

  result.steps = steps;
  result.controller_updates = held.updates();
  result.cumulative_residual = gross_sum > 0.0 ? std::abs(residual_sum) / gross_sum : 0.0;
  const auto air = result.trace.column(OutputColumn::t_air_c);
  result.summary = annual_energy(std::span(&result.totals, 1), air);
  return result;
}

}  // namespace thermsynth
