#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "thermsynth/converter.hpp"

namespace thermsynth {

/// Surfaces with their own incident irradiance: four façades then the roof.
inline constexpr std::size_t kSurfaceCount = 5;
inline constexpr std::size_t kRoofSurface = 4;

enum class BoundaryChannel { outdoor, ground };

/// Linear R-C graph of the zone. Node 0 is the zone air.
struct ThermalNetwork {
  struct Edge {
    std::size_t a = 0;
    std::size_t b = 0;
    double conductance = 0.0;  // W/K
  };
  struct BoundaryLink {
    std::size_t node = 0;
    BoundaryChannel channel = BoundaryChannel::outdoor;
    double conductance = 0.0;  // W/K
    int surface = -1;          // irradiance index feeding the sol-air term, -1 for none
    double solar_gain = 0.0;   // W per W/m², conductance·α·R_se
  };

  std::vector<double> capacity;  // J/K per node
  std::vector<Edge> edges;
  std::vector<BoundaryLink> boundary_links;
  std::array<double, 4> window_conductance{};     // air ↔ outdoor, W/K
  std::array<double, 4> window_solar_aperture{};  // m²
  std::vector<double> radiative_weights;          // per node, sums to 1 (or all zero)
  double ground_temperature = 10.0;
  double volume = 0.0;
  double air_change_rate = 0.0;
  double heat_recovery_rate = 0.0;
  double q_heat_max = 0.0;
  double q_cool_max = 0.0;
  double heating_convective_fraction = 1.0;
  double gains_convective_fraction = 1.0;
  double openable_window_area = 0.0;
  double openable_window_height = 0.0;

  [[nodiscard]] std::size_t node_count() const { return capacity.size(); }
};

struct ZoneState {
  std::vector<double> temperatures;  // °C per node
  double time = 0.0;                 // s

  [[nodiscard]] double air() const { return temperatures.front(); }
};

/// Boundary conditions and commands held constant over one step.
struct StepInputs {
  double outdoor_temperature = 0.0;
  std::array<double, kSurfaceCount> irradiance{};  // S, W, N, E, roof (W/m²)
  double internal_gains = 0.0;                     // W
  double heat_command = 0.0;
  double cool_command = 0.0;
  double window_open = 0.0;
  std::optional<double> ach_override;  // 1/h, replaces the configured air change rate
};

/// Energy flows over one step (J). Cooling counts heat extracted.
struct EnergyLedger {
  double heating = 0.0;
  double cooling = 0.0;
  double solar_transmitted = 0.0;
  double solar_absorbed_opaque = 0.0;
  double internal_gains = 0.0;
  double envelope_loss = 0.0;
  double ventilation_loss = 0.0;
  double window_airflow_loss = 0.0;
  double storage_change = 0.0;

  [[nodiscard]] double residual() const {
    return heating - cooling + solar_transmitted + solar_absorbed_opaque + internal_gains -
           envelope_loss - ventilation_loss - window_airflow_loss - storage_change;
  }
  /// Sum of the magnitudes of every term.
  [[nodiscard]] double gross() const;

  EnergyLedger& operator+=(const EnergyLedger& other);
};

struct StepResult {
  ZoneState state;
  EnergyLedger ledger;
  double heat_power = 0.0;      // W applied over the step
  double cool_power = 0.0;      // W extracted over the step
  double ach_effective = 0.0;   // ventilation plus window airflow, 1/h
};

ThermalNetwork assemble_network(const ModelParams& params);

/// Single-sided stack airflow through an open window, m³/s.
double window_airflow(double t_in, double t_out, double window_area, double window_height,
                      double open_fraction);

/// Backward-Euler stepper. Caches the factorisation while the time-varying
/// air↔outdoor conductance stays unchanged.
class Integrator {
 public:
  Integrator(const ThermalNetwork& net, double dt);

  StepResult advance(const ZoneState& state, const StepInputs& inputs);

  [[nodiscard]] double dt() const { return dt_; }

 private:
  void refactor(double variable_conductance);

  const ThermalNetwork* net_;
  double dt_;
  Eigen::MatrixXd base_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double cached_conductance_;
  bool factored_ = false;
  Eigen::VectorXd rhs_;
  Eigen::VectorXd sources_;
};

StepResult step(const ThermalNetwork& net, const ZoneState& state, const StepInputs& inputs,
                double dt);

/// Solves K·T = q. Window airflow is iterated to its fixed point on the air temperature.
ZoneState steady_state(const ThermalNetwork& net, const StepInputs& inputs);

/// Steady state with the air node held at `air_temperature`.
ZoneState steady_state_pinned_air(const ThermalNetwork& net, const StepInputs& inputs,
                                  double air_temperature);

struct EnergySummary {
  double heating_kwh = 0.0;
  double cooling_kwh = 0.0;
  double air_p10 = 0.0;
  double air_p50 = 0.0;
  double air_p90 = 0.0;
  double air_mean = 0.0;
};

/// Nearest-rank percentile, p in (0, 100].
double percentile_nearest_rank(std::span<const double> values, double p);

EnergySummary annual_energy(std::span<const EnergyLedger> ledgers,
                            std::span<const double> air_temperatures);

}  // namespace thermsynth
