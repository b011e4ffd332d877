#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace thermsynth {

/// Façade orientations, in the order used for every per-orientation array.
enum class Facade { south = 0, west = 1, north = 2, east = 3 };
inline constexpr std::array<Facade, 4> kFacades{Facade::south, Facade::west, Facade::north,
                                                 Facade::east};
inline constexpr std::array<std::string_view, 4> kFacadeNames{"south", "west", "north", "east"};
/// Surface azimuth, degrees clockwise from north.
inline constexpr std::array<double, 4> kFacadeAzimuthDeg{180.0, 270.0, 0.0, 90.0};

using Weights3 = std::array<double, 3>;
using Weights4 = std::array<double, 4>;

inline constexpr Weights3 kUniformC{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
inline constexpr Weights4 kUniformR{0.25, 0.25, 0.25, 0.25};

// Fixed physical constants of the model.
inline constexpr double kAirDensity = 1.204;       // kg/m³
inline constexpr double kAirHeatCapacity = 1005.0;  // J/(kg K)
inline constexpr double kInteriorFilm = 0.13;       // m²K/W
inline constexpr double kExteriorFilm = 0.04;       // m²K/W

/// User-facing building parameters. Names follow the configuration keys.
/// Heat capacities are J/(m²K); U-values W/(m²K); temperatures °C.
struct BuildingConfig {
  double zone_length = 10.0;
  double zone_width = 9.0;
  int n_floors = 1;
  double floor_height = 2.6;

  double fAWin_south = 0.14;
  double fAWin_west = 0.14;
  double fAWin_north = 0.14;
  double fAWin_east = 0.14;
  double fATransToAWindow = 0.7;
  double fARoofToAFloor = 1.0;
  double fAInt = 1.0;

  double UExt = 0.7;
  double UIntWall = 1.5;
  double UFloor = 0.5;
  double URoof = 0.4;
  double UWin = 1.3;
  double gWin = 0.6;

  double heatCapacity_wall = 250e3;
  double heatCapacity_intWall = 100e3;
  double heatCapacity_floor = 300e3;
  double heatCapacity_roof = 100e3;
  double heatCapacity_furniture_per_m2 = 10e3;

  double heatRecoveryRate = 0.0;
  double airChangeRate = 0.5;  // 1/h

  double roomTempLowerSetpoint = 18.0;
  double roomTempUpperSetpoint = 22.0;
  bool useInternalController = true;

  Weights3 extWall_C_distribution = kUniformC;
  Weights3 intWall_C_distribution = kUniformC;
  Weights3 floor_C_distribution = kUniformC;
  Weights3 roof_C_distribution = kUniformC;
  Weights4 extWall_R_distribution = kUniformR;
  Weights4 intWall_R_distribution = kUniformR;
  Weights4 floor_R_distribution = kUniformR;
  Weights4 roof_R_distribution = kUniformR;

  double internalGainsConvectiveFraction = 0.5;
  double heatingConvectiveFraction = 0.7;

  double ground_temperature = 10.0;
  double solar_absorptance_opaque = 0.6;
  double albedo = 0.2;
  double design_outdoor_temperature = -12.0;
  double heating_safety_factor = 1.3;
  double cooling_power_per_floor_area = 40.0;  // W/m²

  // Openable window used for airing.
  double openable_window_area = 1.5;    // m²
  double openable_window_height = 1.2;  // m

  /// Explicit sizing overrides (W). Unset means derived by the converter.
  std::optional<double> q_heat_max;
  std::optional<double> q_cool_max;

  [[nodiscard]] std::array<double, 4> window_fractions() const {
    return {fAWin_south, fAWin_west, fAWin_north, fAWin_east};
  }
};

/// Throws ConfigError naming the first violated key.
void validate(const BuildingConfig& config);

/// Value held by a configuration key.
using KeyValue = std::variant<double, bool, std::string, std::vector<double>>;

enum class KeyKind { real, integer, flag, weights3, weights4, optional_real };

struct BuildingKey {
  std::string_view name;
  KeyKind kind;
};

/// Every building key in canonical order (the manifest uses this order).
std::span<const BuildingKey> building_keys();

/// Lookup by exact name; nullptr when unknown.
const BuildingKey* find_building_key(std::string_view name);

/// Read a key. Optional reals that are unset yield an empty vector.
KeyValue get_building_key(const BuildingConfig& config, std::string_view name);

/// Assign a key; throws ConfigError on type mismatch. An empty list clears an optional key.
void set_building_key(BuildingConfig& config, std::string_view name, const KeyValue& value);

}  // namespace thermsynth
