#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "thermsynth/control.hpp"
#include "thermsynth/converter.hpp"
#include "thermsynth/network.hpp"
#include "thermsynth/profiles.hpp"
#include "thermsynth/weather.hpp"

namespace thermsynth {

struct SimulationSettings {
  double start = 0.0;
  double stop = kYearSeconds;
  double dt = 60.0;
  double output_interval = 300.0;
};

/// Throws ConfigError naming the offending simulation key.
void validate(const SimulationSettings& settings);

enum class OutputColumn : std::size_t {
  time_s,
  t_air_c,
  t_out_c,
  q_heat_w,
  q_cool_w,
  u_heat,
  u_cool,
  window_open,
  gains_w,
  sol_dir_s_wm2,
  sol_dir_w_wm2,
  sol_dir_n_wm2,
  sol_dir_e_wm2,
  sol_dir_roof_wm2,
  sol_dif_wm2,
  ach_effective,
};
inline constexpr std::size_t kColumnCount = 16;

std::span<const std::string_view> column_names();
/// Throws ConfigError("unknown column NAME").
OutputColumn parse_column(std::string_view name);

using OutputRow = std::array<double, kColumnCount>;

/// A row at time t holds the state at t and the inputs and actuation of the
/// interval starting at t (the last row repeats the final interval's inputs).
struct SimulationTrace {
  std::vector<OutputRow> rows;
  [[nodiscard]] std::vector<double> column(OutputColumn c) const;
};

struct RunInputs {
  const IncidentSeries* weather = nullptr;
  const YearProfile* gains = nullptr;   // null: no internal gains
  const YearProfile* window = nullptr;  // null: window closed unless commanded
};

struct SimulationResult {
  SimulationTrace trace;
  EnergyLedger totals;
  EnergySummary summary;
  std::size_t steps = 0;
  std::size_t controller_updates = 0;
  double max_step_residual = 0.0;    // max over steps of |residual| / gross
  double cumulative_residual = 0.0;  // |Σ residual| / Σ gross
};

/// Initial state: steady state at the first instant with heating off; when a
/// heating controller is active and that leaves the air below the setpoint,
/// the air node is held at the setpoint instead.
ZoneState warm_start(const ThermalNetwork& net, const ControllerConfig& control,
                     const RunInputs& inputs, const SimulationSettings& settings);

/// Runs one building. `controller` replaces the one built from `control` when given.
SimulationResult simulate(const ModelParams& params, const ControllerConfig& control,
                          const RunInputs& inputs, const SimulationSettings& settings,
                          std::unique_ptr<Controller> controller = nullptr);

}  // namespace thermsynth
