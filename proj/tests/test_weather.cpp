#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "thermsynth/errors.hpp"
#include "thermsynth/weather.hpp"

using namespace thermsynth;

namespace {

struct Row {
  double temp = 5.0;
  double ghi = 0.0;
  double dni = 0.0;
  double dhi = 0.0;
};

std::string make_epw(const std::vector<Row>& rows) {
  std::ostringstream out;
  out << "LOCATION,Testville,-,DEU,synthetic,000000,48.13,11.70,1.0,520.0\n";
  for (const char* h : {"DESIGN CONDITIONS,0", "TYPICAL/EXTREME PERIODS,0", "GROUND TEMPERATURES,0",
                        "HOLIDAYS/DAYLIGHT SAVINGS,No,0,0,0", "COMMENTS 1,test",
                        "COMMENTS 2,test", "DATA PERIODS,1,1,Data,Monday,1/1,12/31"}) {
    out << h << "\n";
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    out << "1999,1,1," << (i % 24 + 1) << ",60,?9?9?9?9E0?9?9?9?9?9?9?9?9?9?9?9?9?9?9?9*9*9?9?9?9,"
        << r.temp << ",0.0,80,98000,0,0,300," << r.ghi << "," << r.dni << "," << r.dhi
        << ",0,0,0,0,180,2.0,5,5,20000,77777,9,999999999,0,0.1,0,88,0.0,0.0,0.0\n";
  }
  return out.str();
}

std::vector<Row> year_rows() { return std::vector<Row>(kHoursPerYear); }

}  // namespace

TEST(Epw, ParsesSiteAndColumns) {
  auto rows = year_rows();
  rows[10] = {-3.5, 120.0, 300.0, 40.0};
  const WeatherSeries w = parse_epw(make_epw(rows), "mem");
  EXPECT_EQ(w.records.size(), kHoursPerYear);
  EXPECT_EQ(w.site.city, "Testville");
  EXPECT_DOUBLE_EQ(w.site.latitude, 48.13);
  EXPECT_DOUBLE_EQ(w.site.longitude, 11.70);
  EXPECT_DOUBLE_EQ(w.site.timezone, 1.0);
  EXPECT_DOUBLE_EQ(w.records[10].dry_bulb, -3.5);
  EXPECT_DOUBLE_EQ(w.records[10].ghi, 120.0);
  EXPECT_DOUBLE_EQ(w.records[10].dni, 300.0);
  EXPECT_DOUBLE_EQ(w.records[10].dhi, 40.0);
}

TEST(Epw, WrongRecordCount) {
  try {
    parse_epw(make_epw(std::vector<Row>(10)));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_STREQ(e.what(), "expected 8760 records, found 10");
  }
}

TEST(Epw, MissingValuesInterpolated) {
  auto rows = year_rows();
  rows[100].dni = 100.0;
  rows[101].dni = 9999.0;
  rows[102].dni = 200.0;
  rows[200].temp = 0.0;
  rows[201].temp = 99.9;
  rows[202].temp = 99.9;
  rows[203].temp = 3.0;
  const WeatherSeries w = parse_epw(make_epw(rows));
  EXPECT_DOUBLE_EQ(w.records[101].dni, 150.0);
  EXPECT_DOUBLE_EQ(w.records[201].dry_bulb, 1.0);
  EXPECT_DOUBLE_EQ(w.records[202].dry_bulb, 2.0);
}

TEST(Epw, UnparsableFieldReportsRowAndColumn) {
  std::string text = make_epw(year_rows());
  const auto pos = text.find(",5,0.0,80");  // first data row dry-bulb
  text.replace(pos, 2, ",x");
  try {
    parse_epw(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("row 1"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 7"), std::string::npos) << msg;
  }
}

TEST(Epw, MissingLocation) {
  EXPECT_THROW(parse_epw("DESIGN CONDITIONS,0\n"), ParseError);
}

TEST(Epw, MissingFileNamesPath) {
  try {
    load_weather("/nonexistent/dir/nowhere.epw");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/nowhere.epw"), std::string::npos);
  }
}

TEST(Epw, BundledFile) {
  const WeatherSeries w = load_weather(default_weather_path());
  EXPECT_EQ(w.records.size(), kHoursPerYear);
  EXPECT_GE(w.site.latitude, -90.0);
  EXPECT_LE(w.site.latitude, 90.0);
  const WeatherStats s = weather_stats(w);
  EXPECT_GE(s.ghi_consistency_fraction, 0.9);
}

TEST(WeatherCsv, FallbackFormat) {
  std::ostringstream out;
  out << "latitude,10.5\nlongitude,-3.25\ntimezone,0\ntime_h,temp_c,ghi,dni,dhi\n";
  for (std::size_t h = 0; h < kHoursPerYear; ++h) {
    out << h << "," << (h == 5 ? 7.5 : 1.0) << ",0,0,0\n";
  }
  const WeatherSeries w = parse_weather_csv(out.str());
  EXPECT_DOUBLE_EQ(w.site.latitude, 10.5);
  EXPECT_DOUBLE_EQ(w.site.longitude, -3.25);
  EXPECT_DOUBLE_EQ(w.records[5].dry_bulb, 7.5);
  EXPECT_THROW(parse_weather_csv("latitude,1\nlongitude,1\ntimezone,0\ntemp,time\n"), ParseError);
}

TEST(Sun, EquatorEquinoxNoon) {
  const Site site{"", 0.0, 0.0, 0.0, 0.0};
  double best = -90.0;
  for (int m = 11 * 60; m <= 13 * 60; ++m) {
    best = std::max(best, solar_position(site, 79 * 86400.0 + m * 60.0).altitude_deg);
  }
  EXPECT_NEAR(best, 90.0, 1.0);
}

TEST(Sun, MunichSolsticeNoon) {
  const Site site{"", 48.1, 11.58, 1.0, 0.0};
  double best = -90.0;
  double best_az = 0.0;
  for (int m = 10 * 60; m <= 15 * 60; ++m) {
    const SunPosition p = solar_position(site, 171 * 86400.0 + m * 60.0);
    if (p.altitude_deg > best) {
      best = p.altitude_deg;
      best_az = p.azimuth_deg;
    }
  }
  EXPECT_NEAR(best, 65.35, 0.5);
  EXPECT_NEAR(best_az, 180.0, 2.0);
}

TEST(Sun, WinterMidnightBelowHorizon) {
  for (double lat : {-30.0, 0.0, 48.1, 65.0}) {
    const Site site{"", lat, 0.0, 0.0, 0.0};
    EXPECT_LT(solar_position(site, 10 * 86400.0).altitude_deg, 0.0) << lat;
  }
}

TEST(Sun, MorningEastAfternoonWest) {
  const Site site{"", 48.1, 11.58, 1.0, 0.0};
  EXPECT_LT(solar_position(site, 171 * 86400.0 + 8 * 3600.0).azimuth_deg, 180.0);
  EXPECT_GT(solar_position(site, 171 * 86400.0 + 17 * 3600.0).azimuth_deg, 180.0);
}

TEST(Incident, BeamOnSouthFacade) {
  WeatherRecord r;
  r.dni = 800.0;
  EXPECT_NEAR(direct_irradiance(r, SunPosition{30.0, 180.0}, 0), 692.8, 0.05);
  EXPECT_EQ(direct_irradiance(r, SunPosition{30.0, 180.0}, 2), 0.0);  // north
  EXPECT_NEAR(direct_irradiance(r, SunPosition{30.0, 180.0}, kRoofSurface), 400.0, 1e-9);
}

TEST(Incident, SunBelowHorizonHasNoBeam) {
  WeatherRecord r;
  r.dni = 800.0;
  for (std::size_t s = 0; s < kSurfaceCount; ++s) {
    EXPECT_EQ(direct_irradiance(r, SunPosition{-1.0, 90.0}, s), 0.0);
  }
}

TEST(Incident, IsotropicDiffuseAndGround) {
  WeatherRecord r;
  r.dhi = 100.0;
  r.ghi = 300.0;
  for (std::size_t f = 0; f < 4; ++f) {
    EXPECT_DOUBLE_EQ(incident_irradiance(r, SunPosition{-5.0, 0.0}, f, 0.2), 80.0);
  }
  EXPECT_DOUBLE_EQ(incident_irradiance(r, SunPosition{-5.0, 0.0}, kRoofSurface, 0.2), 100.0);
}

TEST(Incident, BoundedByAvailableRadiation) {
  const WeatherSeries w = load_weather(default_weather_path());
  const IncidentSeries s = derive_incident(w, 0.2);
  for (std::size_t h = 0; h < kHoursPerYear; ++h) {
    const auto& r = w.records[h];
    for (std::size_t k = 0; k < kSurfaceCount; ++k) {
      EXPECT_GE(s.incident[h][k], 0.0);
      EXPECT_LE(s.incident[h][k], r.dni + r.dhi + 0.2 * r.ghi + 1e-9);
    }
  }
}

TEST(Incident, EastWestMirrorAtEquatorEquinox) {
  const Site site{"", 0.0, 0.0, 0.0, 0.0};
  WeatherRecord r;
  r.dni = 700.0;
  // Solar noon on day 80 lies a few minutes off 12:00 (equation of time); find it first.
  double noon = 12 * 3600.0;
  double best = -90.0;
  for (int s = 11 * 3600; s <= 13 * 3600; s += 1) {
    const double alt = solar_position(site, 79 * 86400.0 + s).altitude_deg;
    if (alt > best) {
      best = alt;
      noon = s;
    }
  }
  for (int k = 1; k <= 5; ++k) {
    const double dt = k * 3600.0;
    const double east = direct_irradiance(r, solar_position(site, 79 * 86400.0 + noon - dt), 3);
    const double west = direct_irradiance(r, solar_position(site, 79 * 86400.0 + noon + dt), 1);
    EXPECT_NEAR(east, west, 0.5) << k;  // 1 s grid on the noon search
  }
}

TEST(Sample, LinearTemperatureConstantIrradiance) {
  IncidentSeries s = test::constant_weather(0.0);
  s.temperature[3] = 0.0;
  s.temperature[4] = 2.0;
  s.incident[3] = {100, 200, 300, 400, 500};
  EXPECT_DOUBLE_EQ(sample(s, 4 * 3600.0).outdoor_temperature, 2.0);
  EXPECT_DOUBLE_EQ(sample(s, 3.5 * 3600.0).outdoor_temperature, 1.0);
  EXPECT_EQ(sample(s, 3 * 3600.0 + 1.0).irradiance[4], 500.0);
  EXPECT_EQ(sample(s, 4 * 3600.0 - 1.0).irradiance[4], 500.0);
  EXPECT_EQ(sample(s, 4 * 3600.0).irradiance[4], 0.0);
  EXPECT_NO_THROW(sample(s, kYearSeconds));
  EXPECT_THROW(sample(s, -1.0), SimulationError);
  EXPECT_THROW(sample(s, kYearSeconds + 1.0), SimulationError);
}

TEST(Sample, IrradianceIntegralPreserved) {
  const IncidentSeries& s = test::bundled_weather();
  double hourly = 0.0;
  double sampled = 0.0;
  for (std::size_t h = 0; h < kHoursPerYear; ++h) hourly += s.incident[h][0] * 3600.0;
  for (double t = 0.0; t < kYearSeconds; t += 300.0) sampled += irradiance_over(s, t)[0] * 300.0;
  EXPECT_NEAR(sampled, hourly, 1e-9 * hourly);
}
