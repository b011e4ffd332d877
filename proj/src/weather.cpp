#include "thermsynth/weather.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "thermsynth/errors.hpp"

namespace thermsynth {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = end + 1;
  }
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string_view::npos) {
    lines.pop_back();
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    fields.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                      : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_number(std::string_view field) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) return std::nullopt;
  return value;
}

double number_at(const std::vector<std::string_view>& fields, std::size_t column_1based,
                 std::size_t row_1based, std::string_view what) {
  if (fields.size() < column_1based) {
    throw ParseError("row " + std::to_string(row_1based) + ": missing column " +
                     std::to_string(column_1based) + " (" + std::string(what) + ")");
  }
  const auto v = to_number(fields[column_1based - 1]);
  if (!v) {
    throw ParseError("row " + std::to_string(row_1based) + " column " +
                     std::to_string(column_1based) + ": cannot parse '" +
                     std::string(fields[column_1based - 1]) + "' as " + std::string(what));
  }
  return *v;
}

/// Replace flagged entries by linear interpolation between the nearest valid neighbours.
void interpolate_missing(std::vector<double>& values, const std::vector<bool>& missing,
                         std::string_view what) {
  const std::size_t n = values.size();
  std::optional<std::size_t> prev;
  for (std::size_t i = 0; i < n; ++i) {
    if (!missing[i]) {
      prev = i;
      continue;
    }
    std::size_t next = i;
    while (next < n && missing[next]) ++next;
    if (!prev && next == n) {
      throw ParseError("column " + std::string(what) + " has no valid values");
    }
    for (std::size_t k = i; k < next; ++k) {
      if (!prev) {
        values[k] = values[next];
      } else if (next == n) {
        values[k] = values[*prev];
      } else {
        const double w = static_cast<double>(k - *prev) / static_cast<double>(next - *prev);
        values[k] = values[*prev] + w * (values[next] - values[*prev]);
      }
    }
    i = next - 1;
  }
}

void check_record_count(std::size_t found) {
  if (found != kHoursPerYear) {
    throw ParseError("expected " + std::to_string(kHoursPerYear) + " records, found " +
                     std::to_string(found));
  }
}

void check_site(const Site& site) {
  if (!(site.latitude >= -90.0 && site.latitude <= 90.0)) {
    throw ParseError("latitude out of range");
  }
}

}  // namespace

WeatherSeries parse_epw(std::string_view text, std::string source) {
  const auto lines = split_lines(text);
  if (lines.empty() || trim(split_fields(lines.front()).front()) != "LOCATION") {
    throw ParseError("missing LOCATION header");
  }
  WeatherSeries w;
  w.source = std::move(source);
  const auto loc = split_fields(lines.front());
  if (loc.size() < 9) throw ParseError("LOCATION header has too few fields");
  w.site.city = std::string(trim(loc[1]));
  w.site.latitude = number_at(loc, 7, 0, "latitude");
  w.site.longitude = number_at(loc, 8, 0, "longitude");
  w.site.timezone = number_at(loc, 9, 0, "timezone");
  if (loc.size() >= 10) {
    if (auto e = to_number(loc[9])) w.site.elevation = *e;
  }
  check_site(w.site);

  constexpr std::size_t kHeaderLines = 8;
  const std::size_t data_rows = lines.size() > kHeaderLines ? lines.size() - kHeaderLines : 0;
  check_record_count(data_rows);

  std::vector<double> temp(data_rows), ghi(data_rows), dni(data_rows), dhi(data_rows);
  std::vector<bool> temp_missing(data_rows), ghi_missing(data_rows), dni_missing(data_rows),
      dhi_missing(data_rows);
  for (std::size_t r = 0; r < data_rows; ++r) {
    const auto fields = split_fields(lines[kHeaderLines + r]);
    const std::size_t row = r + 1;
    temp[r] = number_at(fields, 7, row, "dry-bulb temperature");
    ghi[r] = number_at(fields, 14, row, "global horizontal radiation");
    dni[r] = number_at(fields, 15, row, "direct normal radiation");
    dhi[r] = number_at(fields, 16, row, "diffuse horizontal radiation");
    temp_missing[r] = temp[r] >= 99.9;
    ghi_missing[r] = ghi[r] >= 9999.0;
    dni_missing[r] = dni[r] >= 9999.0;
    dhi_missing[r] = dhi[r] >= 9999.0;
  }
  interpolate_missing(temp, temp_missing, "dry-bulb temperature");
  interpolate_missing(ghi, ghi_missing, "global horizontal radiation");
  interpolate_missing(dni, dni_missing, "direct normal radiation");
  interpolate_missing(dhi, dhi_missing, "diffuse horizontal radiation");

  w.records.resize(data_rows);
  for (std::size_t r = 0; r < data_rows; ++r) {
    w.records[r] = {temp[r], std::max(0.0, ghi[r]), std::max(0.0, dni[r]), std::max(0.0, dhi[r])};
  }
  return w;
}

WeatherSeries parse_weather_csv(std::string_view text, std::string source) {
  const auto lines = split_lines(text);
  if (lines.size() < 4) throw ParseError("weather CSV: missing site header");
  WeatherSeries w;
  w.source = std::move(source);
  const std::array<std::string_view, 3> keys{"latitude", "longitude", "timezone"};
  std::array<double, 3> site{};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto f = split_fields(lines[i]);
    if (f.size() != 2 || trim(f[0]) != keys[i]) {
      throw ParseError("weather CSV line " + std::to_string(i + 1) + ": expected '" +
                       std::string(keys[i]) + ",<value>'");
    }
    site[i] = number_at(f, 2, i + 1, keys[i]);
  }
  w.site.city = "csv";
  w.site.latitude = site[0];
  w.site.longitude = site[1];
  w.site.timezone = site[2];
  check_site(w.site);
  if (trim(lines[3]) != "time_h,temp_c,ghi,dni,dhi") {
    throw ParseError("weather CSV: expected header time_h,temp_c,ghi,dni,dhi");
  }
  const std::size_t data_rows = lines.size() - 4;
  check_record_count(data_rows);
  w.records.resize(data_rows);
  for (std::size_t r = 0; r < data_rows; ++r) {
    const auto f = split_fields(lines[4 + r]);
    const double hour = number_at(f, 1, r + 1, "time_h");
    if (hour != static_cast<double>(r)) {
      throw ParseError("weather CSV row " + std::to_string(r + 1) + ": expected time_h " +
                       std::to_string(r));
    }
    w.records[r] = {number_at(f, 2, r + 1, "temp_c"), std::max(0.0, number_at(f, 3, r + 1, "ghi")),
                    std::max(0.0, number_at(f, 4, r + 1, "dni")),
                    std::max(0.0, number_at(f, 5, r + 1, "dhi"))};
  }
  return w;
}

WeatherSeries load_weather(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open weather file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    if (path.extension() == ".csv") return parse_weather_csv(text, path.string());
    return parse_epw(text, path.string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

SunPosition solar_position(const Site& site, double time_s) {
  const double day_of_year = std::floor(time_s / 86400.0) + 1.0;
  const double local_hour = std::fmod(time_s, 86400.0) / 3600.0;

  const double declination = 23.45 * std::sin(360.0 * (284.0 + day_of_year) / 365.0 * kDeg);
  const double b = 2.0 * std::numbers::pi * (day_of_year - 1.0) / 365.0;
  const double eot_min = 229.18 * (0.000075 + 0.001868 * std::cos(b) - 0.032077 * std::sin(b) -
                                   0.014615 * std::cos(2.0 * b) - 0.040849 * std::sin(2.0 * b));
  const double solar_hour =
      local_hour + (4.0 * (site.longitude - 15.0 * site.timezone) + eot_min) / 60.0;
  const double hour_angle = 15.0 * (solar_hour - 12.0) * kDeg;

  const double phi = site.latitude * kDeg;
  const double delta = declination * kDeg;
  const double sin_alt = std::sin(phi) * std::sin(delta) +
                         std::cos(phi) * std::cos(delta) * std::cos(hour_angle);
  SunPosition sun;
  sun.altitude_deg = std::asin(std::clamp(sin_alt, -1.0, 1.0)) / kDeg;
  const double az = std::atan2(std::sin(hour_angle), std::cos(hour_angle) * std::sin(phi) -
                                                         std::tan(delta) * std::cos(phi));
  sun.azimuth_deg = std::fmod(az / kDeg + 180.0 + 360.0, 360.0);
  return sun;
}

double direct_irradiance(const WeatherRecord& record, const SunPosition& sun, std::size_t surface) {
  if (sun.altitude_deg <= 0.0) return 0.0;
  const double alt = sun.altitude_deg * kDeg;
  if (surface == kRoofSurface) return record.dni * std::max(0.0, std::sin(alt));
  const double gamma = kFacadeAzimuthDeg[surface] * kDeg;
  return record.dni * std::max(0.0, std::cos(alt) * std::cos(sun.azimuth_deg * kDeg - gamma));
}

double incident_irradiance(const WeatherRecord& record, const SunPosition& sun,
                           std::size_t surface, double albedo) {
  const double direct = direct_irradiance(record, sun, surface);
  if (surface == kRoofSurface) return direct + record.dhi;
  // Vertical surface, isotropic sky: view factors 1/2 to sky and ground.
  return direct + 0.5 * record.dhi + 0.5 * albedo * record.ghi;
}

IncidentSeries derive_incident(const WeatherSeries& weather, double albedo) {
  IncidentSeries s;
  const std::size_t n = weather.records.size();
  s.temperature.resize(n);
  s.incident.resize(n);
  s.direct.resize(n);
  s.diffuse_horizontal.resize(n);
  for (std::size_t h = 0; h < n; ++h) {
    const auto& rec = weather.records[h];
    const SunPosition sun = solar_position(weather.site, (static_cast<double>(h) + 0.5) * 3600.0);
    s.temperature[h] = rec.dry_bulb;
    s.diffuse_horizontal[h] = rec.dhi;
    for (std::size_t surf = 0; surf < kSurfaceCount; ++surf) {
      s.direct[h][surf] = direct_irradiance(rec, sun, surf);
      s.incident[h][surf] = incident_irradiance(rec, sun, surf, albedo);
    }
  }
  return s;
}

namespace {

std::size_t hour_index(const IncidentSeries& series, double t) {
  if (series.hours() == 0) throw SimulationError("empty weather series");
  const double year = static_cast<double>(series.hours()) * 3600.0;
  if (!(t >= 0.0 && t <= year)) {
    throw SimulationError("weather sample time " + std::to_string(t) + " s outside the year");
  }
  return std::min(static_cast<std::size_t>(t / 3600.0), series.hours() - 1);
}

}  // namespace

std::array<double, kSurfaceCount> irradiance_over(const IncidentSeries& series, double t) {
  return series.incident[hour_index(series, t)];
}

WeatherSample sample(const IncidentSeries& series, double t) {
  const std::size_t h = hour_index(series, t);
  WeatherSample out;
  const double pos = t / 3600.0;
  const std::size_t lo = std::min(static_cast<std::size_t>(pos), series.hours() - 1);
  const std::size_t hi = std::min(lo + 1, series.hours() - 1);
  const double frac = std::clamp(pos - static_cast<double>(lo), 0.0, 1.0);
  out.outdoor_temperature =
      frac == 0.0 ? series.temperature[lo]
                  : series.temperature[lo] + frac * (series.temperature[hi] - series.temperature[lo]);
  out.irradiance = series.incident[h];
  out.direct = series.direct[h];
  out.diffuse_horizontal = series.diffuse_horizontal[h];
  return out;
}

WeatherStats weather_stats(const WeatherSeries& weather) {
  WeatherStats s;
  if (weather.records.empty()) return s;
  s.min_temperature = weather.records.front().dry_bulb;
  s.max_temperature = s.min_temperature;
  std::size_t consistent = 0;
  double sum_t = 0.0;
  for (std::size_t h = 0; h < weather.records.size(); ++h) {
    const auto& r = weather.records[h];
    sum_t += r.dry_bulb;
    s.min_temperature = std::min(s.min_temperature, r.dry_bulb);
    s.max_temperature = std::max(s.max_temperature, r.dry_bulb);
    s.ghi_kwh_m2 += r.ghi / 1000.0;
    s.dni_kwh_m2 += r.dni / 1000.0;
    s.dhi_kwh_m2 += r.dhi / 1000.0;
    const SunPosition sun = solar_position(weather.site, (static_cast<double>(h) + 0.5) * 3600.0);
    if (sun.altitude_deg > 0.0) {
      ++s.daylight_hours;
      const double modelled = r.dni * std::sin(sun.altitude_deg * kDeg) + r.dhi;
      if (std::abs(r.ghi - modelled) <= 100.0) ++consistent;
    }
  }
  s.mean_temperature = sum_t / static_cast<double>(weather.records.size());
  s.ghi_consistency_fraction =
      s.daylight_hours == 0 ? 0.0
                            : static_cast<double>(consistent) / static_cast<double>(s.daylight_hours);
  return s;
}

}  // namespace thermsynth
