#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace thermsynth {

inline constexpr double kSlotSeconds = 300.0;
inline constexpr std::size_t kSlotsPerDay = 288;
inline constexpr std::size_t kSlotsPerYear = 365 * kSlotsPerDay;

enum class DayKind { workday = 0, saturday = 1, sunday = 2, holiday = 3 };
std::string_view day_kind_name(DayKind kind);

/// Occupancy over [start_min, end_min) of a day.
struct Segment {
  int start_min = 0;
  int end_min = 0;
  double persons = 0.0;
  double appliance_w = 0.0;
  bool sleeping = false;
};

struct DayProfile {
  DayKind kind = DayKind::workday;
  std::vector<Segment> segments;
};

struct Calendar {
  int jan1_weekday = 0;       // 0 = Monday … 6 = Sunday
  std::vector<int> holidays;  // day of year, 1-based
};

/// Two-person household used when the configuration gives no day profiles.
std::array<DayProfile, 4> default_day_profiles();

/// Throws ConfigError when segments overlap, leave the day, or are unsorted.
void validate(const DayProfile& profile);

DayKind day_kind_of(const Calendar& calendar, std::size_t day_index);

/// Per-slot occupancy at 5-minute resolution over the 365-day year.
struct Occupancy {
  std::vector<double> persons;
  std::vector<double> appliances;
  std::vector<std::uint8_t> sleeping;
};

Occupancy expand_occupancy(std::span<const DayProfile> profiles, const Calendar& calendar);

/// Internal gains in W per 5-minute slot: persons·gain_per_person + appliances.
std::vector<double> expand_year(std::span<const DayProfile> profiles, const Calendar& calendar,
                                double gain_per_person = 70.0);

/// Airing rule. Events start at the awareness times when the zone is occupied
/// and nobody sleeps; stochastic mode shifts each start by a seeded offset.
struct WindowRules {
  int airing_minutes = 10;
  std::vector<int> awareness_minutes{7 * 60, 19 * 60};
  bool stochastic = false;
  int jitter_minutes = 30;
};

std::vector<std::uint8_t> window_schedule(const Occupancy& occupancy, const WindowRules& rules,
                                          std::uint64_t seed);

struct YearProfile {
  double resolution = kSlotSeconds;
  std::vector<double> internal_gains;       // W
  std::vector<std::uint8_t> window_open;    // 0 or 1
  std::uint64_t seed = 0;

  [[nodiscard]] std::size_t size() const { return internal_gains.size(); }
  [[nodiscard]] double gains_at(double t) const;
  [[nodiscard]] double window_at(double t) const;
};

struct ProfileSettings {
  std::array<DayProfile, 4> day_profiles = default_day_profiles();
  Calendar calendar;
  double gain_per_person = 70.0;
  WindowRules window_rules;
  std::uint64_t seed = 0;
};

YearProfile generate_year_profile(const ProfileSettings& settings);

inline constexpr std::string_view kProfileHeader = "time_s,internal_gains_w,window_open";

void write_profile_csv(const YearProfile& profile, std::ostream& out);
std::string profile_csv(const YearProfile& profile);
YearProfile read_profile_csv(std::string_view text);
YearProfile load_profile_csv(const std::string& path);

/// Throws ParseError("profile shorter than horizon") if `stop_s` is not covered.
void require_horizon(const YearProfile& profile, double stop_s);

}  // namespace thermsynth
