#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "thermsynth/building_config.hpp"

namespace thermsynth {

struct Geometry {
  double volume = 0.0;           // m³
  double area_floor = 0.0;       // footprint, m²
  double area_roof = 0.0;        // m²
  double area_wall_gross = 0.0;  // all façades incl. windows, m²
  std::array<double, 4> area_facade_gross{};  // per Facade
  std::array<double, 4> area_window{};
  std::array<double, 4> area_wall_net{};
  double area_internal_mass = 0.0;  // exposed internal-wall faces (both sides), m²
  double area_ceilings = 0.0;       // intermediate slabs, m²
};

/// Opaque component kinds, one RC chain each.
enum class Component { wall_south, wall_west, wall_north, wall_east, roof, floor, internal_mass };
inline constexpr std::size_t kComponentCount = 7;
std::string_view component_name(Component c);

/// Outer boundary of a chain.
enum class Boundary { outdoor, ground, zone_air };

/// Three-node RC discretisation of one opaque component.
struct RcChain {
  Component component{};
  Boundary boundary{};
  double area = 0.0;           // component area used for capacity and conduction, m²
  double surface_area = 0.0;   // interior face area exposed to the zone, m²
  int orientation = -1;  // Facade index for walls, -1 otherwise
  std::array<double, 3> capacities{};  // J/K
  std::array<double, 4> segment_resistances{};  // K/W, conductive layer only
  double inner_film = 0.0;  // K/W, zone side of the first node
  double outer_film = 0.0;  // K/W, boundary side of the last node (0 for ground)

  [[nodiscard]] double total_capacity() const {
    return capacities[0] + capacities[1] + capacities[2];
  }
};

struct ModelParams {
  Geometry geometry;
  std::array<RcChain, kComponentCount> chains{};
  bool has_internal_mass = true;
  std::array<double, 4> window_conductance{};    // W/K per Facade
  std::array<double, 4> window_solar_aperture{};  // m², A_win * fATrans * gWin
  double air_capacity = 0.0;                      // J/K
  double air_change_rate = 0.0;                   // 1/h
  double heat_recovery_rate = 0.0;
  double q_heat_max = 0.0;  // W
  double q_cool_max = 0.0;  // W
  double heating_convective_fraction = 0.0;
  double gains_convective_fraction = 0.0;
  double ground_temperature = 0.0;
  double solar_absorptance = 0.0;
  double albedo = 0.2;
  double openable_window_area = 0.0;
  double openable_window_height = 0.0;

  /// Ventilation conductance for a given air change rate (W/K).
  [[nodiscard]] double ventilation_conductance(double ach) const;
};

Geometry derive_geometry(const BuildingConfig& config);

/// Ventilation conductance ρ·c_p·(ACH·V/3600)·(1−η) in W/K.
double ventilation_conductance(double air_change_rate, double volume, double heat_recovery_rate);

/// Steady-state sizing: safety factor times design-day transmission and ventilation loss.
double derive_max_heating_power(const BuildingConfig& config, const Geometry& geometry);

/// Floor-area rule; counts every storey.
double derive_max_cooling_power(const BuildingConfig& config, const Geometry& geometry);

ModelParams build_model_params(const BuildingConfig& config);

}  // namespace thermsynth
