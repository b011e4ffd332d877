#include <gtest/gtest.h>

#include <random>

#include "thermsynth/converter.hpp"
#include "thermsynth/errors.hpp"

using namespace thermsynth;

namespace {

BuildingConfig example_building() {
  BuildingConfig b;
  b.zone_length = 10.0;
  b.zone_width = 8.0;
  b.floor_height = 2.5;
  b.n_floors = 2;
  return b;
}

}  // namespace

TEST(Geometry, HandEvaluatedExample) {
  BuildingConfig b = example_building();
  b.fAWin_south = 0.14;
  const Geometry g = derive_geometry(b);
  EXPECT_DOUBLE_EQ(g.area_window[static_cast<int>(Facade::south)], 7.0);
  EXPECT_DOUBLE_EQ(g.area_wall_gross, 180.0);
  EXPECT_DOUBLE_EQ(g.volume, 400.0);
  EXPECT_DOUBLE_EQ(g.area_facade_gross[static_cast<int>(Facade::east)], 40.0);
  EXPECT_DOUBLE_EQ(g.area_ceilings, 80.0);
}

TEST(Geometry, NoWindowsLeavesNetEqualGross) {
  BuildingConfig b = example_building();
  b.fAWin_south = b.fAWin_west = b.fAWin_north = b.fAWin_east = 0.0;
  const Geometry g = derive_geometry(b);
  double net = 0.0;
  for (int o = 0; o < 4; ++o) {
    EXPECT_EQ(g.area_window[o], 0.0);
    net += g.area_wall_net[o];
  }
  EXPECT_DOUBLE_EQ(net, g.area_wall_gross);
}

TEST(Geometry, RoofFactor) {
  BuildingConfig b = example_building();
  b.fARoofToAFloor = 1.2;
  EXPECT_DOUBLE_EQ(derive_geometry(b).area_roof, 96.0);
}

TEST(Geometry, RotationKeepsTotals) {
  BuildingConfig a = example_building();
  a.fAWin_south = 0.3;
  a.fAWin_north = 0.1;
  a.fAWin_east = 0.05;
  a.fAWin_west = 0.2;
  BuildingConfig r = a;
  r.zone_length = a.zone_width;
  r.zone_width = a.zone_length;
  r.fAWin_south = a.fAWin_east;
  r.fAWin_north = a.fAWin_west;
  r.fAWin_east = a.fAWin_south;
  r.fAWin_west = a.fAWin_north;
  const Geometry ga = derive_geometry(a);
  const Geometry gr = derive_geometry(r);
  double wa = 0.0;
  double wr = 0.0;
  for (int o = 0; o < 4; ++o) {
    wa += ga.area_window[o];
    wr += gr.area_window[o];
  }
  EXPECT_NEAR(wa, wr, 1e-12);
  EXPECT_DOUBLE_EQ(ga.area_wall_gross, gr.area_wall_gross);
}

TEST(Geometry, RejectsBadValuesNamingTheKey) {
  BuildingConfig b;
  b.zone_length = -1.0;
  try {
    derive_geometry(b);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("zone_length"), std::string::npos);
  }
  b = BuildingConfig{};
  b.fAWin_east = 1.2;
  EXPECT_THROW(derive_geometry(b), ConfigError);
}

TEST(Ventilation, ConductanceOfExampleZone) {
  // 1.204 * 1005 * 0.5 * 400 / 3600
  EXPECT_NEAR(ventilation_conductance(0.5, 400.0, 0.0), 67.2233, 1e-4);
  EXPECT_EQ(ventilation_conductance(0.5, 400.0, 1.0), 0.0);
}

TEST(Sizing, MatchesUaTimesDesignDifference) {
  BuildingConfig b;
  const Geometry g = derive_geometry(b);
  double ua = b.URoof * g.area_roof + ventilation_conductance(b.airChangeRate, g.volume, 0.0);
  for (int o = 0; o < 4; ++o) ua += b.UExt * g.area_wall_net[o] + b.UWin * g.area_window[o];
  const double expected = 1.3 * (ua * (22.0 + 12.0) + b.UFloor * g.area_floor * (22.0 - 10.0));
  EXPECT_NEAR(derive_max_heating_power(b, g), expected, 1e-9 * expected);
  EXPECT_DOUBLE_EQ(derive_max_cooling_power(b, g), 40.0 * g.area_floor);
}

TEST(Sizing, MonotoneInEveryLossParameter) {
  const BuildingConfig base;
  const double q0 = derive_max_heating_power(base, derive_geometry(base));
  const auto bumped = [&](auto mutate) {
    BuildingConfig b = base;
    mutate(b);
    return derive_max_heating_power(b, derive_geometry(b));
  };
  EXPECT_GT(bumped([](BuildingConfig& b) { b.UExt *= 1.5; }), q0);
  EXPECT_GT(bumped([](BuildingConfig& b) { b.UWin *= 1.5; }), q0);
  EXPECT_GT(bumped([](BuildingConfig& b) { b.URoof *= 1.5; }), q0);
  EXPECT_GT(bumped([](BuildingConfig& b) { b.UFloor *= 1.5; }), q0);
  EXPECT_GT(bumped([](BuildingConfig& b) { b.airChangeRate *= 2.0; }), q0);
  EXPECT_LT(bumped([](BuildingConfig& b) { b.heatRecoveryRate = 0.8; }), q0);
}

TEST(Sizing, ExplicitOverrideWins) {
  BuildingConfig b;
  b.q_heat_max = 1234.0;
  b.q_cool_max = 0.0;
  const ModelParams p = build_model_params(b);
  EXPECT_EQ(p.q_heat_max, 1234.0);
  EXPECT_EQ(p.q_cool_max, 0.0);
}

TEST(Chains, CapacitySumsMatchComponentTotals) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    BuildingConfig b;
    b.zone_length = 5.0 + 20.0 * u(rng);
    b.zone_width = 5.0 + 20.0 * u(rng);
    b.n_floors = 1 + trial % 3;
    b.heatCapacity_wall = 1e5 * u(rng) * 5.0;
    b.extWall_C_distribution = {0.2, 0.5, 0.3};
    b.floor_R_distribution = {0.1, 0.2, 0.3, 0.4};
    const ModelParams p = build_model_params(b);
    const Geometry& g = p.geometry;
    for (int o = 0; o < 4; ++o) {
      EXPECT_NEAR(p.chains[o].total_capacity(), b.heatCapacity_wall * g.area_wall_net[o],
                  1e-9 * b.heatCapacity_wall * g.area_wall_net[o]);
    }
    EXPECT_NEAR(p.chains[4].total_capacity(), b.heatCapacity_roof * g.area_roof,
                1e-9 * b.heatCapacity_roof * g.area_roof);
    EXPECT_NEAR(p.chains[5].total_capacity(), b.heatCapacity_floor * g.area_floor,
                1e-9 * b.heatCapacity_floor * g.area_floor);
    const double slab = g.area_internal_mass / 2.0 + g.area_ceilings;
    const double mass = b.heatCapacity_intWall * slab +
                        b.heatCapacity_furniture_per_m2 * g.area_floor * b.n_floors;
    EXPECT_NEAR(p.chains[6].total_capacity(), mass, 1e-9 * mass);
  }
}

TEST(Chains, NoFurnitureLeavesWallAndCeilingMass) {
  BuildingConfig b = example_building();
  b.heatCapacity_furniture_per_m2 = 0.0;
  const ModelParams p = build_model_params(b);
  const double slab = p.geometry.area_internal_mass / 2.0 + p.geometry.area_ceilings;
  EXPECT_NEAR(p.chains[6].total_capacity(), b.heatCapacity_intWall * slab, 1e-6);
}

TEST(Chains, WallResistanceReproducesUValue) {
  for (double u : {0.1, 0.7, 1.4}) {
    BuildingConfig b;
    b.UExt = u;
    const ModelParams p = build_model_params(b);
    const RcChain& c = p.chains[0];
    double r = c.inner_film + c.outer_film;
    for (double s : c.segment_resistances) {
      EXPECT_GT(s, 0.0);
      r += s;
    }
    EXPECT_NEAR(1.0 / (r * c.area), u, 1e-12);
    EXPECT_NEAR(c.inner_film * c.area, kInteriorFilm, 1e-12);
    EXPECT_NEAR(c.outer_film * c.area, kExteriorFilm, 1e-12);
  }
}

TEST(Chains, NonPhysicalUValueRejected) {
  BuildingConfig b;
  b.UExt = 8.0;  // 1/U < R_si + R_se
  try {
    build_model_params(b);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("UExt"), std::string::npos);
  }
}

TEST(Keys, RegistryRoundTrip) {
  BuildingConfig b;
  for (const auto& key : building_keys()) {
    const KeyValue v = get_building_key(b, key.name);
    BuildingConfig c;
    set_building_key(c, key.name, v);
    EXPECT_EQ(get_building_key(c, key.name), v) << key.name;
  }
  EXPECT_EQ(find_building_key("UExtt"), nullptr);
  EXPECT_THROW(set_building_key(b, "UExt", true), ConfigError);
  EXPECT_THROW(set_building_key(b, "n_floors", 1.5), ConfigError);
  EXPECT_THROW(set_building_key(b, "extWall_C_distribution", std::vector<double>{0.5, 0.5}),
               ConfigError);
}

TEST(Keys, DistributionMustSumToOne) {
  BuildingConfig b;
  b.extWall_R_distribution = {0.5, 0.5, 0.5, 0.5};
  EXPECT_THROW(validate(b), ConfigError);
}
