#include "thermsynth/converter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thermsynth/errors.hpp"

namespace thermsynth {

namespace {

using RealField = double BuildingConfig::*;
using IntField = int BuildingConfig::*;
using FlagField = bool BuildingConfig::*;
using W3Field = Weights3 BuildingConfig::*;
using W4Field = Weights4 BuildingConfig::*;
using OptField = std::optional<double> BuildingConfig::*;
using Field = std::variant<RealField, IntField, FlagField, W3Field, W4Field, OptField>;

struct KeyEntry {
  BuildingKey key;
  Field field;
};

#define TS_REAL(name) KeyEntry{{#name, KeyKind::real}, &BuildingConfig::name}
#define TS_INT(name) KeyEntry{{#name, KeyKind::integer}, &BuildingConfig::name}
#define TS_FLAG(name) KeyEntry{{#name, KeyKind::flag}, &BuildingConfig::name}
#define TS_W3(name) KeyEntry{{#name, KeyKind::weights3}, &BuildingConfig::name}
#define TS_W4(name) KeyEntry{{#name, KeyKind::weights4}, &BuildingConfig::name}
#define TS_OPT(name) KeyEntry{{#name, KeyKind::optional_real}, &BuildingConfig::name}

const std::array kKeyTable{
    TS_REAL(zone_length),
    TS_REAL(zone_width),
    TS_INT(n_floors),
    TS_REAL(floor_height),
    TS_REAL(fAWin_south),
    TS_REAL(fAWin_west),
    TS_REAL(fAWin_north),
    TS_REAL(fAWin_east),
    TS_REAL(fATransToAWindow),
    TS_REAL(fARoofToAFloor),
    TS_REAL(fAInt),
    TS_REAL(UExt),
    TS_REAL(UIntWall),
    TS_REAL(UFloor),
    TS_REAL(URoof),
    TS_REAL(UWin),
    TS_REAL(gWin),
    TS_REAL(heatCapacity_wall),
    TS_REAL(heatCapacity_intWall),
    TS_REAL(heatCapacity_floor),
    TS_REAL(heatCapacity_roof),
    TS_REAL(heatCapacity_furniture_per_m2),
    TS_REAL(heatRecoveryRate),
    TS_REAL(airChangeRate),
    TS_REAL(roomTempLowerSetpoint),
    TS_REAL(roomTempUpperSetpoint),
    TS_FLAG(useInternalController),
    TS_W3(extWall_C_distribution),
    TS_W3(intWall_C_distribution),
    TS_W3(floor_C_distribution),
    TS_W3(roof_C_distribution),
    TS_W4(extWall_R_distribution),
    TS_W4(intWall_R_distribution),
    TS_W4(floor_R_distribution),
    TS_W4(roof_R_distribution),
    TS_REAL(internalGainsConvectiveFraction),
    TS_REAL(heatingConvectiveFraction),
    TS_REAL(ground_temperature),
    TS_REAL(solar_absorptance_opaque),
    TS_REAL(albedo),
    TS_REAL(design_outdoor_temperature),
    TS_REAL(heating_safety_factor),
    TS_REAL(cooling_power_per_floor_area),
    TS_REAL(openable_window_area),
    TS_REAL(openable_window_height),
    TS_OPT(q_heat_max),
    TS_OPT(q_cool_max),
};

#undef TS_REAL
#undef TS_INT
#undef TS_FLAG
#undef TS_W3
#undef TS_W4
#undef TS_OPT

const std::array<BuildingKey, kKeyTable.size()> kKeys = [] {
  std::array<BuildingKey, kKeyTable.size()> keys{};
  for (std::size_t i = 0; i < kKeyTable.size(); ++i) keys[i] = kKeyTable[i].key;
  return keys;
}();

const KeyEntry& entry_for(std::string_view name) {
  for (const auto& e : kKeyTable) {
    if (e.key.name == name) return e;
  }
  throw ConfigError("unknown key " + std::string(name));
}

[[noreturn]] void type_error(std::string_view name, std::string_view expected) {
  throw ConfigError("key " + std::string(name) + ": expected " + std::string(expected));
}

template <std::size_t N>
std::array<double, N> to_weights(std::string_view name, const KeyValue& value) {
  const auto* list = std::get_if<std::vector<double>>(&value);
  if (list == nullptr || list->size() != N) {
    type_error(name, "a list of " + std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  std::copy(list->begin(), list->end(), out.begin());
  return out;
}

void require(bool ok, std::string_view key, std::string_view what) {
  if (!ok) throw ConfigError("invalid value for " + std::string(key) + ": " + std::string(what));
}

template <std::size_t N>
void require_weights(const std::array<double, N>& w, std::string_view key) {
  double sum = 0.0;
  for (double x : w) {
    require(std::isfinite(x) && x >= 0.0, key, "weights must be non-negative");
    sum += x;
  }
  require(std::abs(sum - 1.0) <= 1e-9, key, "weights must sum to 1");
}

}  // namespace

std::span<const BuildingKey> building_keys() { return kKeys; }

const BuildingKey* find_building_key(std::string_view name) {
  for (const auto& k : kKeys) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

KeyValue get_building_key(const BuildingConfig& config, std::string_view name) {
  const auto& e = entry_for(name);
  return std::visit(
      [&](auto field) -> KeyValue {
        using F = decltype(field);
        if constexpr (std::is_same_v<F, RealField>) {
          return config.*field;
        } else if constexpr (std::is_same_v<F, IntField>) {
          return static_cast<double>(config.*field);
        } else if constexpr (std::is_same_v<F, FlagField>) {
          return config.*field;
        } else if constexpr (std::is_same_v<F, OptField>) {
          const auto& opt = config.*field;
          return opt ? KeyValue{*opt} : KeyValue{std::vector<double>{}};
        } else {
          const auto& arr = config.*field;
          return std::vector<double>(arr.begin(), arr.end());
        }
      },
      e.field);
}

void set_building_key(BuildingConfig& config, std::string_view name, const KeyValue& value) {
  const auto& e = entry_for(name);
  std::visit(
      [&](auto field) {
        using F = decltype(field);
        if constexpr (std::is_same_v<F, OptField>) {
          if (const auto* list = std::get_if<std::vector<double>>(&value); list && list->empty()) {
            config.*field = std::nullopt;
            return;
          }
          const auto* x = std::get_if<double>(&value);
          if (x == nullptr) type_error(name, "a number");
          config.*field = *x;
        } else if constexpr (std::is_same_v<F, RealField>) {
          const auto* x = std::get_if<double>(&value);
          if (x == nullptr) type_error(name, "a number");
          config.*field = *x;
        } else if constexpr (std::is_same_v<F, IntField>) {
          const auto* x = std::get_if<double>(&value);
          if (x == nullptr || std::floor(*x) != *x) type_error(name, "an integer");
          config.*field = static_cast<int>(*x);
        } else if constexpr (std::is_same_v<F, FlagField>) {
          const auto* x = std::get_if<bool>(&value);
          if (x == nullptr) type_error(name, "a boolean");
          config.*field = *x;
        } else if constexpr (std::is_same_v<F, W3Field>) {
          config.*field = to_weights<3>(name, value);
        } else {
          config.*field = to_weights<4>(name, value);
        }
      },
      e.field);
}

void validate(const BuildingConfig& c) {
  require(c.zone_length > 0.0, "zone_length", "must be > 0");
  require(c.zone_width > 0.0, "zone_width", "must be > 0");
  require(c.n_floors >= 1, "n_floors", "must be >= 1");
  require(c.floor_height > 0.0, "floor_height", "must be > 0");

  const std::array<std::pair<double, const char*>, 4> windows{{{c.fAWin_south, "fAWin_south"},
                                                               {c.fAWin_west, "fAWin_west"},
                                                               {c.fAWin_north, "fAWin_north"},
                                                               {c.fAWin_east, "fAWin_east"}}};
  for (const auto& [f, key] : windows) {
    require(f >= 0.0 && f < 1.0, key, "window fraction must lie in [0, 1)");
  }
  require(c.fATransToAWindow > 0.0 && c.fATransToAWindow <= 1.0, "fATransToAWindow",
          "must lie in (0, 1]");
  require(c.fARoofToAFloor >= 1.0, "fARoofToAFloor", "must be >= 1");
  require(c.fAInt >= 0.0, "fAInt", "must be >= 0");

  require(c.UExt > 0.0, "UExt", "must be > 0");
  require(c.UIntWall > 0.0, "UIntWall", "must be > 0");
  require(c.UFloor > 0.0, "UFloor", "must be > 0");
  require(c.URoof > 0.0, "URoof", "must be > 0");
  require(c.UWin > 0.0, "UWin", "must be > 0");
  require(c.gWin >= 0.0 && c.gWin <= 1.0, "gWin", "must lie in [0, 1]");

  require(c.heatCapacity_wall > 0.0, "heatCapacity_wall", "must be > 0");
  require(c.heatCapacity_intWall > 0.0, "heatCapacity_intWall", "must be > 0");
  require(c.heatCapacity_floor > 0.0, "heatCapacity_floor", "must be > 0");
  require(c.heatCapacity_roof > 0.0, "heatCapacity_roof", "must be > 0");
  require(c.heatCapacity_furniture_per_m2 >= 0.0, "heatCapacity_furniture_per_m2", "must be >= 0");

  require(c.heatRecoveryRate >= 0.0 && c.heatRecoveryRate <= 1.0, "heatRecoveryRate",
          "must lie in [0, 1]");
  require(c.airChangeRate >= 0.0, "airChangeRate", "must be >= 0");
  require(c.roomTempLowerSetpoint <= c.roomTempUpperSetpoint, "roomTempLowerSetpoint",
          "must not exceed roomTempUpperSetpoint");

  require_weights(c.extWall_C_distribution, "extWall_C_distribution");
  require_weights(c.intWall_C_distribution, "intWall_C_distribution");
  require_weights(c.floor_C_distribution, "floor_C_distribution");
  require_weights(c.roof_C_distribution, "roof_C_distribution");
  require_weights(c.extWall_R_distribution, "extWall_R_distribution");
  require_weights(c.intWall_R_distribution, "intWall_R_distribution");
  require_weights(c.floor_R_distribution, "floor_R_distribution");
  require_weights(c.roof_R_distribution, "roof_R_distribution");

  require(c.internalGainsConvectiveFraction >= 0.0 && c.internalGainsConvectiveFraction <= 1.0,
          "internalGainsConvectiveFraction", "must lie in [0, 1]");
  require(c.heatingConvectiveFraction >= 0.0 && c.heatingConvectiveFraction <= 1.0,
          "heatingConvectiveFraction", "must lie in [0, 1]");
  require(c.solar_absorptance_opaque >= 0.0 && c.solar_absorptance_opaque <= 1.0,
          "solar_absorptance_opaque", "must lie in [0, 1]");
  require(c.albedo >= 0.0 && c.albedo <= 1.0, "albedo", "must lie in [0, 1]");
  require(c.heating_safety_factor >= 1.0, "heating_safety_factor", "must be >= 1");
  require(c.cooling_power_per_floor_area >= 0.0, "cooling_power_per_floor_area", "must be >= 0");
  require(c.openable_window_area > 0.0, "openable_window_area", "must be > 0");
  require(c.openable_window_height > 0.0, "openable_window_height", "must be > 0");
  if (c.q_heat_max) require(*c.q_heat_max >= 0.0, "q_heat_max", "must be >= 0");
  if (c.q_cool_max) require(*c.q_cool_max >= 0.0, "q_cool_max", "must be >= 0");
}

std::string_view component_name(Component c) {
  switch (c) {
    case Component::wall_south: return "wall_south";
    case Component::wall_west: return "wall_west";
    case Component::wall_north: return "wall_north";
    case Component::wall_east: return "wall_east";
    case Component::roof: return "roof";
    case Component::floor: return "floor";
    case Component::internal_mass: return "internal_mass";
  }
  return "?";
}

Geometry derive_geometry(const BuildingConfig& c) {
  validate(c);
  Geometry g;
  const double storeys_height = c.floor_height * c.n_floors;
  g.volume = c.zone_length * c.zone_width * c.floor_height * c.n_floors;
  g.area_floor = c.zone_length * c.zone_width;
  g.area_roof = g.area_floor * c.fARoofToAFloor;
  g.area_wall_gross = 2.0 * c.n_floors * c.floor_height * (c.zone_length + c.zone_width);

  const auto fractions = c.window_fractions();
  for (std::size_t o = 0; o < 4; ++o) {
    const auto facade = kFacades[o];
    const bool long_side = facade == Facade::south || facade == Facade::north;
    g.area_facade_gross[o] = storeys_height * (long_side ? c.zone_length : c.zone_width);
    g.area_window[o] = g.area_facade_gross[o] * fractions[o];
    g.area_wall_net[o] = g.area_facade_gross[o] - g.area_window[o];
    if (g.area_wall_net[o] < 0.0) {
      throw ConfigError("invalid value for fAWin_" + std::string(kFacadeNames[o]) +
                        ": net wall area is negative");
    }
  }
  g.area_internal_mass = c.fAInt * g.area_wall_gross;
  g.area_ceilings = g.area_floor * (c.n_floors - 1);
  return g;
}

double ventilation_conductance(double air_change_rate, double volume, double heat_recovery_rate) {
  return kAirDensity * kAirHeatCapacity * (air_change_rate * volume / 3600.0) *
         (1.0 - heat_recovery_rate);
}

double ModelParams::ventilation_conductance(double ach) const {
  return thermsynth::ventilation_conductance(ach, geometry.volume, heat_recovery_rate);
}

double derive_max_heating_power(const BuildingConfig& c, const Geometry& g) {
  const double dt_outdoor = c.roomTempUpperSetpoint - c.design_outdoor_temperature;
  const double dt_ground = c.roomTempUpperSetpoint - c.ground_temperature;
  if (!(dt_outdoor > 0.0)) {
    throw ConfigError(
        "invalid value for design_outdoor_temperature: must be below roomTempUpperSetpoint");
  }
  if (!(dt_ground > 0.0)) {
    throw ConfigError("invalid value for ground_temperature: must be below roomTempUpperSetpoint");
  }
  double ua_outdoor = c.URoof * g.area_roof;
  for (std::size_t o = 0; o < 4; ++o) {
    ua_outdoor += c.UExt * g.area_wall_net[o] + c.UWin * g.area_window[o];
  }
  ua_outdoor += ventilation_conductance(c.airChangeRate, g.volume, c.heatRecoveryRate);
  const double ua_ground = c.UFloor * g.area_floor;
  return c.heating_safety_factor * (ua_outdoor * dt_outdoor + ua_ground * dt_ground);
}

double derive_max_cooling_power(const BuildingConfig& c, const Geometry& g) {
  return c.cooling_power_per_floor_area * g.area_floor * c.n_floors;
}

namespace {

RcChain make_chain(Component component, Boundary boundary, double area, double surface_area,
                   double u_value, double capacity_per_area, double extra_capacity,
                   const Weights3& c_dist, const Weights4& r_dist, double film_resistance,
                   double outer_film_per_area, std::string_view u_key) {
  RcChain chain;
  chain.component = component;
  chain.boundary = boundary;
  chain.area = area;
  chain.surface_area = surface_area;

  const double conductive = 1.0 / u_value - film_resistance;  // m²K/W
  if (!(conductive > 0.0)) {
    throw ConfigError("invalid value for " + std::string(u_key) +
                      ": U-value implies non-physical conductive layer");
  }
  const double total_capacity = capacity_per_area * area + extra_capacity;
  for (std::size_t i = 0; i < 3; ++i) chain.capacities[i] = c_dist[i] * total_capacity;
  for (std::size_t i = 0; i < 4; ++i) chain.segment_resistances[i] = r_dist[i] * conductive / area;

  // Interior film over the exposed face; internal mass exposes both faces of `area`.
  chain.inner_film = kInteriorFilm / (boundary == Boundary::zone_air ? surface_area / 2.0 : area);
  if (boundary == Boundary::outdoor) {
    chain.outer_film = outer_film_per_area / area;
  } else if (boundary == Boundary::zone_air) {
    chain.outer_film = kInteriorFilm / (surface_area / 2.0);
  }
  return chain;
}

}  // namespace

ModelParams build_model_params(const BuildingConfig& c) {
  ModelParams p;
  p.geometry = derive_geometry(c);
  const Geometry& g = p.geometry;

  for (std::size_t o = 0; o < 4; ++o) {
    auto chain = make_chain(static_cast<Component>(o), Boundary::outdoor, g.area_wall_net[o],
                            g.area_wall_net[o], c.UExt, c.heatCapacity_wall, 0.0,
                            c.extWall_C_distribution, c.extWall_R_distribution,
                            kInteriorFilm + kExteriorFilm, kExteriorFilm, "UExt");
    chain.orientation = static_cast<int>(o);
    p.chains[o] = chain;
    p.window_conductance[o] = c.UWin * g.area_window[o];
    p.window_solar_aperture[o] = g.area_window[o] * c.fATransToAWindow * c.gWin;
  }
  p.chains[4] = make_chain(Component::roof, Boundary::outdoor, g.area_roof, g.area_roof, c.URoof,
                           c.heatCapacity_roof, 0.0, c.roof_C_distribution, c.roof_R_distribution,
                           kInteriorFilm + kExteriorFilm, kExteriorFilm, "URoof");
  // Ground floor only; the floor boundary is the ground temperature with no exterior film.
  p.chains[5] = make_chain(Component::floor, Boundary::ground, g.area_floor, g.area_floor, c.UFloor,
                           c.heatCapacity_floor, 0.0, c.floor_C_distribution,
                           c.floor_R_distribution, kInteriorFilm, 0.0, "UFloor");

  // Internal walls (both faces counted in area_internal_mass) plus intermediate ceilings,
  // with furniture lumped in.
  const double slab_area = g.area_internal_mass / 2.0 + g.area_ceilings;
  const double furniture = c.heatCapacity_furniture_per_m2 * g.area_floor * c.n_floors;
  p.has_internal_mass = slab_area > 0.0;
  if (p.has_internal_mass) {
    p.chains[6] = make_chain(Component::internal_mass, Boundary::zone_air, slab_area,
                             2.0 * slab_area, c.UIntWall, c.heatCapacity_intWall, furniture,
                             c.intWall_C_distribution, c.intWall_R_distribution,
                             2.0 * kInteriorFilm, 0.0, "UIntWall");
  }

  p.air_capacity = kAirDensity * kAirHeatCapacity * g.volume;
  if (!p.has_internal_mass) p.air_capacity += furniture;
  p.air_change_rate = c.airChangeRate;
  p.heat_recovery_rate = c.heatRecoveryRate;
  p.q_heat_max = c.q_heat_max ? *c.q_heat_max : derive_max_heating_power(c, g);
  p.q_cool_max = c.q_cool_max ? *c.q_cool_max : derive_max_cooling_power(c, g);
  p.heating_convective_fraction = c.heatingConvectiveFraction;
  p.gains_convective_fraction = c.internalGainsConvectiveFraction;
  p.ground_temperature = c.ground_temperature;
  p.solar_absorptance = c.solar_absorptance_opaque;
  p.albedo = c.albedo;
  p.openable_window_area = c.openable_window_area;
  p.openable_window_height = c.openable_window_height;
  return p;
}

}  // namespace thermsynth
