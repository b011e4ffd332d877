#include "thermsynth/profiles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "thermsynth/errors.hpp"

namespace thermsynth {

std::string_view day_kind_name(DayKind kind) {
  switch (kind) {
    case DayKind::workday: return "workday";
    case DayKind::saturday: return "saturday";
    case DayKind::sunday: return "sunday";
    case DayKind::holiday: return "holiday";
  }
  return "?";
}

std::array<DayProfile, 4> default_day_profiles() {
  std::array<DayProfile, 4> p;
  p[0] = {DayKind::workday,
          {{0, 390, 2, 50, true},
           {390, 480, 2, 150, false},
           {480, 1020, 0, 50, false},
           {1020, 1350, 2, 200, false},
           {1350, 1440, 2, 50, true}}};
  p[1] = {DayKind::saturday,
          {{0, 480, 2, 50, true},
           {480, 780, 2, 150, false},
           {780, 960, 0, 50, false},
           {960, 1380, 2, 200, false},
           {1380, 1440, 2, 50, true}}};
  p[2] = {DayKind::sunday, {{0, 540, 2, 50, true}, {540, 1380, 2, 180, false}, {1380, 1440, 2, 50, true}}};
  p[3] = {DayKind::holiday, p[2].segments};
  return p;
}

void validate(const DayProfile& profile) {
  const std::string name(day_kind_name(profile.kind));
  int last_end = 0;
  for (const auto& s : profile.segments) {
    if (s.start_min < 0 || s.start_min >= 1440 || s.end_min <= s.start_min || s.end_min > 1440) {
      throw ConfigError("profiles." + name + ": segment outside the day or empty");
    }
    if (s.start_min < last_end) {
      throw ConfigError("profiles." + name + ": segments overlap or are unsorted");
    }
    if (!(s.persons >= 0.0) || !(s.appliance_w >= 0.0)) {
      throw ConfigError("profiles." + name + ": persons and appliances must be >= 0");
    }
    last_end = s.end_min;
  }
}

DayKind day_kind_of(const Calendar& calendar, std::size_t day_index) {
  const int doy = static_cast<int>(day_index) + 1;
  if (std::find(calendar.holidays.begin(), calendar.holidays.end(), doy) != calendar.holidays.end()) {
    return DayKind::holiday;
  }
  const int weekday = (calendar.jan1_weekday + static_cast<int>(day_index)) % 7;
  if (weekday == 5) return DayKind::saturday;
  if (weekday == 6) return DayKind::sunday;
  return DayKind::workday;
}

Occupancy expand_occupancy(std::span<const DayProfile> profiles, const Calendar& calendar) {
  if (calendar.jan1_weekday < 0 || calendar.jan1_weekday > 6) {
    throw ConfigError("profiles.jan1_weekday must lie in 0..6");
  }
  for (int d : calendar.holidays) {
    if (d < 1 || d > 365) throw ConfigError("profiles.holidays: day " + std::to_string(d) + " outside 1..365");
  }
  std::array<const DayProfile*, 4> by_kind{};
  for (const auto& p : profiles) {
    validate(p);
    by_kind[static_cast<std::size_t>(p.kind)] = &p;
  }
  for (std::size_t k = 0; k < 4; ++k) {
    if (by_kind[k] == nullptr) {
      throw ConfigError("missing day profile " +
                        std::string(day_kind_name(static_cast<DayKind>(k))));
    }
  }

  // One day's slots per kind, then tile over the calendar.
  std::array<Occupancy, 4> day_slots;
  for (std::size_t k = 0; k < 4; ++k) {
    auto& d = day_slots[k];
    d.persons.assign(kSlotsPerDay, 0.0);
    d.appliances.assign(kSlotsPerDay, 0.0);
    d.sleeping.assign(kSlotsPerDay, 0);
    for (const auto& s : by_kind[k]->segments) {
      for (std::size_t slot = 0; slot < kSlotsPerDay; ++slot) {
        const int minute = static_cast<int>(slot) * 5;
        if (minute >= s.start_min && minute < s.end_min) {
          d.persons[slot] = s.persons;
          d.appliances[slot] = s.appliance_w;
          d.sleeping[slot] = s.sleeping ? 1 : 0;
        }
      }
    }
  }

  Occupancy occ;
  occ.persons.reserve(kSlotsPerYear);
  occ.appliances.reserve(kSlotsPerYear);
  occ.sleeping.reserve(kSlotsPerYear);
  for (std::size_t day = 0; day < 365; ++day) {
    const auto& d = day_slots[static_cast<std::size_t>(day_kind_of(calendar, day))];
    occ.persons.insert(occ.persons.end(), d.persons.begin(), d.persons.end());
    occ.appliances.insert(occ.appliances.end(), d.appliances.begin(), d.appliances.end());
    occ.sleeping.insert(occ.sleeping.end(), d.sleeping.begin(), d.sleeping.end());
  }
  return occ;
}

std::vector<double> expand_year(std::span<const DayProfile> profiles, const Calendar& calendar,
                                double gain_per_person) {
  const Occupancy occ = expand_occupancy(profiles, calendar);
  std::vector<double> gains(occ.persons.size());
  for (std::size_t i = 0; i < gains.size(); ++i) {
    gains[i] = occ.persons[i] * gain_per_person + occ.appliances[i];
  }
  return gains;
}

std::vector<std::uint8_t> window_schedule(const Occupancy& occupancy, const WindowRules& rules,
                                          std::uint64_t seed) {
  const std::size_t n = occupancy.persons.size();
  std::vector<std::uint8_t> open(n, 0);
  const auto awake = [&](std::size_t slot) {
    return occupancy.persons[slot] > 0.0 && occupancy.sleeping[slot] == 0;
  };
  const auto event_slots = static_cast<std::size_t>(std::max(0, rules.airing_minutes) / 5);
  const std::int64_t jitter_slots = std::max(0, rules.jitter_minutes) / 5;
  std::mt19937_64 rng(seed);

  const std::size_t days = n / kSlotsPerDay;
  for (std::size_t day = 0; day < days; ++day) {
    for (int minute : rules.awareness_minutes) {
      const std::size_t nominal = day * kSlotsPerDay + static_cast<std::size_t>(minute / 5);
      if (nominal >= n || !awake(nominal)) continue;
      std::int64_t start = static_cast<std::int64_t>(nominal);
      if (rules.stochastic && jitter_slots > 0) {
        const auto span = static_cast<std::uint64_t>(2 * jitter_slots + 1);
        start += static_cast<std::int64_t>(rng() % span) - jitter_slots;
        start = std::clamp<std::int64_t>(start, 0, static_cast<std::int64_t>(n) - 1);
      }
      for (std::size_t k = 0; k < event_slots; ++k) {
        const std::size_t slot = static_cast<std::size_t>(start) + k;
        if (slot < n && awake(slot)) open[slot] = 1;
      }
    }
  }
  return open;
}

double YearProfile::gains_at(double t) const {
  if (internal_gains.empty()) return 0.0;
  const auto i = std::min(static_cast<std::size_t>(std::max(0.0, t) / resolution),
                          internal_gains.size() - 1);
  return internal_gains[i];
}

double YearProfile::window_at(double t) const {
  if (window_open.empty()) return 0.0;
  const auto i = std::min(static_cast<std::size_t>(std::max(0.0, t) / resolution),
                          window_open.size() - 1);
  return window_open[i];
}

YearProfile generate_year_profile(const ProfileSettings& s) {
  const Occupancy occ = expand_occupancy(s.day_profiles, s.calendar);
  YearProfile y;
  y.seed = s.seed;
  y.internal_gains.resize(occ.persons.size());
  for (std::size_t i = 0; i < occ.persons.size(); ++i) {
    y.internal_gains[i] = occ.persons[i] * s.gain_per_person + occ.appliances[i];
  }
  y.window_open = window_schedule(occ, s.window_rules, s.seed);
  return y;
}

void write_profile_csv(const YearProfile& profile, std::ostream& out) {
  out << kProfileHeader << '\n';
  std::array<char, 64> buf{};
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const auto t = static_cast<long long>(std::llround(static_cast<double>(i) * profile.resolution));
    char* p = std::to_chars(buf.data(), buf.data() + buf.size(), t).ptr;
    *p++ = ',';
    p = std::to_chars(p, buf.data() + buf.size(), profile.internal_gains[i]).ptr;
    *p++ = ',';
    *p++ = profile.window_open[i] ? '1' : '0';
    *p++ = '\n';
    out.write(buf.data(), p - buf.data());
  }
}

std::string profile_csv(const YearProfile& profile) {
  std::ostringstream out;
  write_profile_csv(profile, out);
  return out.str();
}

YearProfile read_profile_csv(std::string_view text) {
  YearProfile y;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  double previous_time = -1.0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no++ == 0) {
      if (line != kProfileHeader) {
        throw ParseError("profile CSV: expected header " + std::string(kProfileHeader));
      }
      continue;
    }
    if (line.empty()) continue;
    const std::size_t row = line_no - 1;
    const auto bad = [&](std::string_view what) {
      return ParseError("profile CSV row " + std::to_string(row) + ": " + std::string(what));
    };
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos) {
      throw bad("expected 3 columns");
    }
    double time = 0.0;
    double gains = 0.0;
    double window = 0.0;
    const auto parse = [&](std::string_view field, double& v) {
      const auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      return ec == std::errc{} && p == field.data() + field.size() && !field.empty();
    };
    if (!parse(line.substr(0, c1), time)) throw bad("malformed time_s");
    if (!parse(line.substr(c1 + 1, c2 - c1 - 1), gains) || !(gains >= 0.0)) {
      throw bad("malformed internal_gains_w");
    }
    if (!parse(line.substr(c2 + 1), window) || (window != 0.0 && window != 1.0)) {
      throw bad("window_open must be 0 or 1");
    }
    if (time <= previous_time) throw bad("non-monotone time_s");
    if (time != static_cast<double>(y.internal_gains.size()) * kSlotSeconds) {
      throw bad("time_s must advance in 300 s steps from 0");
    }
    previous_time = time;
    y.internal_gains.push_back(gains);
    y.window_open.push_back(window != 0.0 ? 1 : 0);
  }
  if (line_no == 0) throw ParseError("profile CSV: empty file");
  return y;
}

YearProfile load_profile_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open profile file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return read_profile_csv(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void require_horizon(const YearProfile& profile, double stop_s) {
  // The slot containing the last simulated instant must exist.
  const double covered = static_cast<double>(profile.size()) * profile.resolution;
  if (profile.size() == 0 || covered < stop_s) throw ParseError("profile shorter than horizon");
}

}  // namespace thermsynth
