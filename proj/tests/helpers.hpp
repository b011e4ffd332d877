#pragma once

#include <filesystem>
#include <string>

#include "thermsynth/batch.hpp"
#include "thermsynth/network.hpp"
#include "thermsynth/weather.hpp"

namespace thermsynth::test {

/// Constant outdoor temperature, no sun, for the whole year.
inline IncidentSeries constant_weather(double temperature) {
  IncidentSeries s;
  s.temperature.assign(kHoursPerYear, temperature);
  s.incident.assign(kHoursPerYear, {});
  s.direct.assign(kHoursPerYear, {});
  s.diffuse_horizontal.assign(kHoursPerYear, 0.0);
  return s;
}

inline const IncidentSeries& bundled_weather() {
  static const IncidentSeries s = derive_incident(load_weather(default_weather_path()), 0.2);
  return s;
}

/// One node coupled to the outdoor air.
inline ThermalNetwork single_node(double capacity, double conductance) {
  ThermalNetwork net;
  net.capacity = {capacity};
  net.radiative_weights = {0.0};
  net.boundary_links.push_back({0, BoundaryChannel::outdoor, conductance, -1, 0.0});
  return net;
}

/// Fresh, empty scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("thermsynth_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace thermsynth::test
