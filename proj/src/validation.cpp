#include "thermsynth/validation.hpp"

#include <cmath>

#include "thermsynth/config_document.hpp"
#include "thermsynth/control.hpp"
#include "thermsynth/converter.hpp"
#include "thermsynth/network.hpp"
#include "thermsynth/weather.hpp"

namespace thermsynth {

namespace {

ThermalNetwork single_node(double capacity, double g_out, double g_ground, double t_ground) {
  ThermalNetwork net;
  net.capacity = {capacity};
  net.radiative_weights = {0.0};
  if (g_out > 0.0) net.boundary_links.push_back({0, BoundaryChannel::outdoor, g_out, -1, 0.0});
  if (g_ground > 0.0) net.boundary_links.push_back({0, BoundaryChannel::ground, g_ground, -1, 0.0});
  net.ground_temperature = t_ground;
  return net;
}

double noon_altitude(const Site& site, int day_of_year) {
  double best = -90.0;
  const double day0 = (day_of_year - 1) * 86400.0;
  for (int minute = 10 * 60; minute <= 15 * 60; ++minute) {
    best = std::max(best, solar_position(site, day0 + minute * 60.0).altitude_deg);
  }
  return best;
}

}  // namespace

std::vector<OracleResult> run_oracle_suite() {
  std::vector<OracleResult> out;
  const auto check = [&](std::string name, double expected, double actual, double tol) {
    out.push_back({std::move(name), std::abs(actual - expected) <= tol, expected, actual, tol});
  };

  BuildingConfig b;
  b.zone_length = 10.0;
  b.zone_width = 8.0;
  b.floor_height = 2.5;
  b.n_floors = 2;
  b.fAWin_south = 0.14;
  const Geometry g = derive_geometry(b);
  check("geometry: south window area", 7.0, g.area_window[0], 1e-12);
  check("geometry: gross wall area", 180.0, g.area_wall_gross, 1e-12);
  check("geometry: volume", 400.0, g.volume, 1e-12);
  b.fARoofToAFloor = 1.2;
  check("geometry: roof area", 96.0, derive_geometry(b).area_roof, 1e-12);

  check("ventilation conductance, 0.5 1/h in 400 m3", 1.204 * 1005.0 * 0.5 * 400.0 / 3600.0,
        ventilation_conductance(0.5, 400.0, 0.0), 1e-9);
  check("ventilation conductance, full heat recovery", 0.0,
        ventilation_conductance(0.5, 400.0, 1.0), 0.0);

  {
    const ThermalNetwork net = single_node(1e6, 100.0, 0.0, 0.0);
    ZoneState s{{20.0}, 0.0};
    StepInputs in;
    const StepResult r = step(net, s, in, 60.0);
    check("single node backward-Euler step", 20.0 / 1.006, r.state.air(), 1e-12);
  }
  {
    const ThermalNetwork net = single_node(1e6, 100.0, 100.0, 20.0);
    StepInputs in;
    check("steady state between 0 and 20 C", 10.0, steady_state(net, in).air(), 1e-12);
    in.internal_gains = 1000.0;
    ThermalNetwork with_source = net;
    with_source.gains_convective_fraction = 1.0;
    check("steady state with 1 kW source", 15.0, steady_state(with_source, in).air(), 1e-12);
  }

  check("window airflow 1.5 m2, 1.2 m, 22/2 C",
        (1.0 / 3.0) * 0.6 * 1.5 * std::sqrt(9.81 * 1.2 * 20.0 / 285.15),
        window_airflow(22.0, 2.0, 1.5, 1.2, 1.0), 1e-12);
  check("window airflow, no temperature difference", 0.0, window_airflow(20.0, 20.0, 1.5, 1.2, 1.0),
        0.0);

  {
    WeatherRecord rec;
    rec.dni = 800.0;
    const SunPosition sun{30.0, 180.0};
    check("beam on south facade, sun due south at 30 deg", 800.0 * std::cos(M_PI / 6.0),
          direct_irradiance(rec, sun, 0), 1e-9);
    WeatherRecord diffuse;
    diffuse.dhi = 100.0;
    diffuse.ghi = 300.0;
    check("diffuse plus ground-reflected on a facade", 80.0,
          incident_irradiance(diffuse, SunPosition{-5.0, 0.0}, 0, 0.2), 1e-12);
  }

  check("equator equinox noon altitude", 90.0, noon_altitude(Site{"", 0.0, 0.0, 0.0, 0.0}, 80), 1.0);
  check("Munich solstice noon altitude", 65.35,
        noon_altitude(Site{"", 48.1, 11.58, 1.0, 0.0}, 172), 0.5);

  {
    ControllerConfig c;
    c.day_setpoint = 22.0;
    c.proportional_band = 2.0;
    check("proportional controller at 21 C, setpoint 22", 0.5,
          internal_p(c, 21.0, 12.0 * 3600.0).u_heat, 1e-12);
  }

  {
    const auto r = expand_range(0.1, 0.5, 0.2, "UExt");
    check("range {0.1, 0.5, 0.2} value count", 3.0, static_cast<double>(r.size()), 0.0);
    check("range {0.1, 0.5, 0.2} middle value", 0.3, r.size() == 3 ? r[1] : NAN, 0.0);
  }
  return out;
}

}  // namespace thermsynth
