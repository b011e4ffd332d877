#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "thermsynth/network.hpp"

namespace thermsynth {

inline constexpr std::size_t kHoursPerYear = 8760;
inline constexpr double kYearSeconds = 365.0 * 86400.0;

struct Site {
  std::string city;
  double latitude = 0.0;   // deg, north positive
  double longitude = 0.0;  // deg, east positive
  double timezone = 0.0;   // h offset from UTC
  double elevation = 0.0;  // m
};

/// One hourly record; record k covers [k·3600, (k+1)·3600) s of local standard time.
struct WeatherRecord {
  double dry_bulb = 0.0;  // °C
  double ghi = 0.0;       // W/m²
  double dni = 0.0;
  double dhi = 0.0;
};

struct WeatherSeries {
  Site site;
  std::vector<WeatherRecord> records;
  std::string source;
};

/// EPW text. Data columns (1-based): dry-bulb 7, GHI 14, DNI 15, DHI 16.
WeatherSeries parse_epw(std::string_view text, std::string source = {});

/// Simple CSV fixture: `latitude,..`, `longitude,..`, `timezone,..`, then
/// a `time_h,temp_c,ghi,dni,dhi` table with 8760 rows.
WeatherSeries parse_weather_csv(std::string_view text, std::string source = {});

/// Reads `.epw` or `.csv` by extension. Missing files raise ParseError naming the path.
WeatherSeries load_weather(const std::filesystem::path& path);

struct SunPosition {
  double altitude_deg = 0.0;
  double azimuth_deg = 0.0;  // clockwise from north
};

/// Sun position at `time_s` seconds after Jan 1 00:00 local standard time.
SunPosition solar_position(const Site& site, double time_s);

/// Irradiance on a façade (index into kFacades) or on the roof (kRoofSurface).
double incident_irradiance(const WeatherRecord& record, const SunPosition& sun,
                           std::size_t surface, double albedo);

/// Beam part only; zero with the sun below the horizon.
double direct_irradiance(const WeatherRecord& record, const SunPosition& sun, std::size_t surface);

/// Hourly boundary data for the model, evaluated with the sun at mid-hour.
struct IncidentSeries {
  std::vector<double> temperature;                               // °C per hour
  std::vector<std::array<double, kSurfaceCount>> incident;       // W/m²
  std::vector<std::array<double, kSurfaceCount>> direct;         // W/m²
  std::vector<double> diffuse_horizontal;                        // W/m²
  [[nodiscard]] std::size_t hours() const { return temperature.size(); }
};

IncidentSeries derive_incident(const WeatherSeries& weather, double albedo);

struct WeatherSample {
  double outdoor_temperature = 0.0;
  std::array<double, kSurfaceCount> irradiance{};
  std::array<double, kSurfaceCount> direct{};
  double diffuse_horizontal = 0.0;
};

/// Temperature interpolated linearly between hourly records; irradiance held
/// constant over each hour. Valid for 0 ≤ t ≤ year length (the end clamps).
WeatherSample sample(const IncidentSeries& series, double t);

/// Irradiance over the interval starting at `t` (the hour containing t).
std::array<double, kSurfaceCount> irradiance_over(const IncidentSeries& series, double t);

struct WeatherStats {
  double mean_temperature = 0.0;
  double min_temperature = 0.0;
  double max_temperature = 0.0;
  double ghi_kwh_m2 = 0.0;
  double dni_kwh_m2 = 0.0;
  double dhi_kwh_m2 = 0.0;
  std::size_t daylight_hours = 0;
  double ghi_consistency_fraction = 0.0;  // daylight hours with |GHI − (DNI·sin h + DHI)| ≤ 100
};

WeatherStats weather_stats(const WeatherSeries& weather);

}  // namespace thermsynth
