#include "thermsynth/config_document.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "thermsynth/errors.hpp"
#include "toml.hpp"

namespace thermsynth {

namespace {

constexpr std::array<std::string_view, 7> kControlKeys{
    "kind", "plugin", "day_start_h", "day_end_h", "proportional_band", "hysteresis",
    "update_interval"};
constexpr std::array<std::string_view, 3> kPathKeys{"weather_path", "internal_gain_path",
                                                    "window_opening_path"};
constexpr std::string_view kFloorAreaKey = "floor_area";

std::string where(const toml::node& node) {
  const auto& src = node.source();
  return " (line " + std::to_string(src.begin.line) + ", column " +
         std::to_string(src.begin.column) + ")";
}

[[noreturn]] void fail(const std::string& message, const toml::node& node) {
  throw ConfigError(message + where(node));
}

/// Table entries sorted by their position in the document.
std::vector<std::pair<std::string, const toml::node*>> ordered(const toml::table& table) {
  std::vector<std::pair<std::string, const toml::node*>> out;
  for (auto&& [k, v] : table) out.emplace_back(std::string(k.str()), &v);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    const auto& sa = a.second->source().begin;
    const auto& sb = b.second->source().begin;
    return std::tie(sa.line, sa.column) < std::tie(sb.line, sb.column);
  });
  return out;
}

double as_number(const toml::node& node, std::string_view key) {
  if (auto v = node.value<double>(); v && node.is_number()) return *v;
  fail("key " + std::string(key) + ": expected a number", node);
}

std::string as_string(const toml::node& node, std::string_view key) {
  if (auto v = node.value<std::string>(); v && node.is_string()) return *v;
  fail("key " + std::string(key) + ": expected a string", node);
}

bool as_bool(const toml::node& node, std::string_view key) {
  if (auto v = node.value<bool>(); v && node.is_boolean()) return *v;
  fail("key " + std::string(key) + ": expected a boolean", node);
}

std::vector<double> number_list(const toml::node& node, std::string_view key) {
  const auto* arr = node.as_array();
  if (arr == nullptr) fail("key " + std::string(key) + ": expected a list of numbers", node);
  std::vector<double> out;
  for (const auto& item : *arr) out.push_back(as_number(item, key));
  return out;
}

std::vector<KeyValue> numeric_values(const toml::node& node, std::string_view key) {
  if (node.is_number()) return {as_number(node, key)};
  if (const auto* arr = node.as_array()) {
    if (arr->empty()) fail("key " + std::string(key) + ": empty list", node);
    std::vector<KeyValue> out;
    for (const auto& item : *arr) out.emplace_back(as_number(item, key));
    return out;
  }
  if (const auto* tbl = node.as_table()) {
    std::optional<double> min, max, step;
    for (const auto& [k, v] : ordered(*tbl)) {
      if (k == "min") {
        min = as_number(*v, key);
      } else if (k == "max") {
        max = as_number(*v, key);
      } else if (k == "step") {
        step = as_number(*v, key);
      } else {
        fail("unknown key " + k + " in range for " + std::string(key), *v);
      }
    }
    if (!min || !max || !step) fail("key " + std::string(key) + ": range needs min, max and step", node);
    std::vector<KeyValue> out;
    for (double x : expand_range(*min, *max, *step, key)) out.emplace_back(x);
    return out;
  }
  fail("key " + std::string(key) + ": expected a number, list or {min, max, step} range", node);
}

std::vector<KeyValue> flag_values(const toml::node& node, std::string_view key) {
  if (node.is_boolean()) return {as_bool(node, key)};
  if (const auto* arr = node.as_array(); arr != nullptr && !arr->empty()) {
    std::vector<KeyValue> out;
    for (const auto& item : *arr) out.emplace_back(as_bool(item, key));
    return out;
  }
  fail("key " + std::string(key) + ": expected a boolean or list of booleans", node);
}

std::vector<KeyValue> weight_values(const toml::node& node, std::string_view key) {
  const auto* arr = node.as_array();
  if (arr == nullptr || arr->empty()) fail("key " + std::string(key) + ": expected a list of weights", node);
  if ((*arr)[0].is_array()) {
    std::vector<KeyValue> out;
    for (const auto& item : *arr) out.emplace_back(number_list(item, key));
    return out;
  }
  return {number_list(node, key)};
}

std::vector<KeyValue> string_values(const toml::node& node, std::string_view key,
                                    const std::filesystem::path* base_dir) {
  const auto resolve = [&](std::string s) {
    if (base_dir != nullptr && !base_dir->empty() && !s.empty()) {
      const std::filesystem::path p(s);
      if (p.is_relative()) s = (*base_dir / p).lexically_normal().string();
    }
    return s;
  };
  if (node.is_string()) return {resolve(as_string(node, key))};
  if (const auto* arr = node.as_array(); arr != nullptr && !arr->empty()) {
    std::vector<KeyValue> out;
    for (const auto& item : *arr) out.emplace_back(resolve(as_string(item, key)));
    return out;
  }
  fail("key " + std::string(key) + ": expected a string or list of strings", node);
}

int parse_clock(const toml::node& node, std::string_view key) {
  const std::string s = as_string(node, key);
  int h = 0;
  int m = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%d:%d%c", &h, &m, &tail) != 2 || h < 0 || h > 24 || m < 0 ||
      m > 59 || (h == 24 && m != 0)) {
    fail("key " + std::string(key) + ": expected HH:MM, got '" + s + "'", node);
  }
  return h * 60 + m;
}

int parse_day_of_year(const toml::node& node) {
  if (node.is_integer()) return static_cast<int>(*node.value<std::int64_t>());
  constexpr std::array<int, 12> kDays{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const std::string s = as_string(node, "holidays");
  int month = 0;
  int day = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%d-%d%c", &month, &day, &tail) != 2 || month < 1 || month > 12 ||
      day < 1 || day > kDays[static_cast<std::size_t>(month - 1)]) {
    fail("key holidays: expected MM-DD or day of year, got '" + s + "'", node);
  }
  int doy = day;
  for (int i = 0; i + 1 < month; ++i) doy += kDays[static_cast<std::size_t>(i)];
  return doy;
}

int parse_weekday(const toml::node& node) {
  if (node.is_integer()) return static_cast<int>(*node.value<std::int64_t>());
  static constexpr std::array<std::string_view, 7> kNames{
      "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"};
  const std::string s = as_string(node, "jan1_weekday");
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == s) return static_cast<int>(i);
  }
  fail("key jan1_weekday: unknown weekday '" + s + "'", node);
}

DayProfile parse_day_profile(const toml::table& table, DayKind kind) {
  DayProfile profile;
  profile.kind = kind;
  for (const auto& [k, v] : ordered(table)) {
    if (k != "segments") fail("unknown key " + k, *v);
    const auto* arr = v->as_array();
    if (arr == nullptr) fail("key segments: expected a list of tables", *v);
    for (const auto& item : *arr) {
      const auto* seg_tbl = item.as_table();
      if (seg_tbl == nullptr) fail("key segments: expected a table", item);
      Segment seg;
      bool has_start = false;
      bool has_end = false;
      for (const auto& [sk, sv] : ordered(*seg_tbl)) {
        if (sk == "start") {
          seg.start_min = parse_clock(*sv, sk);
          has_start = true;
        } else if (sk == "end") {
          seg.end_min = parse_clock(*sv, sk);
          has_end = true;
        } else if (sk == "persons") {
          seg.persons = as_number(*sv, sk);
        } else if (sk == "appliances") {
          seg.appliance_w = as_number(*sv, sk);
        } else if (sk == "sleeping") {
          seg.sleeping = as_bool(*sv, sk);
        } else {
          fail("unknown key " + sk, *sv);
        }
      }
      if (!has_start || !has_end) fail("segment needs start and end", item);
      profile.segments.push_back(seg);
    }
  }
  validate(profile);
  return profile;
}

void parse_profiles(const toml::table& table, ProfileSettings& p) {
  for (const auto& [k, v] : ordered(table)) {
    if (k == "gain_per_person") {
      p.gain_per_person = as_number(*v, k);
      if (!(p.gain_per_person >= 0.0)) fail("invalid value for gain_per_person: must be >= 0", *v);
    } else if (k == "jan1_weekday") {
      p.calendar.jan1_weekday = parse_weekday(*v);
      if (p.calendar.jan1_weekday < 0 || p.calendar.jan1_weekday > 6) {
        fail("invalid value for jan1_weekday: must lie in 0..6", *v);
      }
    } else if (k == "holidays") {
      const auto* arr = v->as_array();
      if (arr == nullptr) fail("key holidays: expected a list", *v);
      p.calendar.holidays.clear();
      for (const auto& item : *arr) {
        const int doy = parse_day_of_year(item);
        if (doy < 1 || doy > 365) fail("invalid value for holidays: day outside 1..365", item);
        p.calendar.holidays.push_back(doy);
      }
    } else if (k == "airing_minutes") {
      p.window_rules.airing_minutes = static_cast<int>(as_number(*v, k));
    } else if (k == "awareness_times") {
      const auto* arr = v->as_array();
      if (arr == nullptr) fail("key awareness_times: expected a list of HH:MM strings", *v);
      p.window_rules.awareness_minutes.clear();
      for (const auto& item : *arr) p.window_rules.awareness_minutes.push_back(parse_clock(item, k));
    } else if (k == "stochastic") {
      p.window_rules.stochastic = as_bool(*v, k);
    } else if (k == "jitter_minutes") {
      p.window_rules.jitter_minutes = static_cast<int>(as_number(*v, k));
    } else if (k == "workday" || k == "saturday" || k == "sunday" || k == "holiday") {
      const auto* tbl = v->as_table();
      if (tbl == nullptr) fail("key " + k + ": expected a table", *v);
      const DayKind kind = k == "workday"    ? DayKind::workday
                           : k == "saturday" ? DayKind::saturday
                           : k == "sunday"   ? DayKind::sunday
                                             : DayKind::holiday;
      p.day_profiles[static_cast<std::size_t>(kind)] = parse_day_profile(*tbl, kind);
    } else {
      fail("unknown key " + k, *v);
    }
  }
}

void parse_simulation(const toml::table& table, ConfigDocument& doc) {
  for (const auto& [k, v] : ordered(table)) {
    if (k == "start") {
      doc.simulation.start = as_number(*v, k);
    } else if (k == "stop") {
      doc.simulation.stop = as_number(*v, k);
    } else if (k == "dt") {
      doc.simulation.dt = as_number(*v, k);
    } else if (k == "output_interval") {
      doc.simulation.output_interval = as_number(*v, k);
    } else if (k == "seed") {
      if (!v->is_integer() || *v->value<std::int64_t>() < 0) {
        fail("key seed: expected a non-negative integer", *v);
      }
      doc.seed = static_cast<std::uint64_t>(*v->value<std::int64_t>());
    } else if (k == "output_columns") {
      const auto* arr = v->as_array();
      if (arr == nullptr || arr->empty()) fail("key output_columns: expected a list of names", *v);
      doc.output_columns.clear();
      for (const auto& item : *arr) {
        try {
          doc.output_columns.push_back(parse_column(as_string(item, k)));
        } catch (const ConfigError& e) {
          fail(e.what(), item);
        }
      }
    } else {
      fail("unknown key " + k, *v);
    }
  }
  validate(doc.simulation);
}

void parse_variation(const toml::table& table, ConfigDocument& doc) {
  for (const auto& [k, v] : ordered(table)) {
    if (k == "mode") {
      const std::string mode = as_string(*v, k);
      if (mode == "cartesian") {
        doc.mode = VariationMode::cartesian;
      } else if (mode == "zip") {
        doc.mode = VariationMode::zip;
      } else {
        fail("invalid value for mode: expected cartesian or zip", *v);
      }
    } else if (k == "label_scheme") {
      const std::string scheme = as_string(*v, k);
      if (scheme == "ordinal_letters") {
        doc.label_scheme = LabelScheme::ordinal_letters;
      } else if (scheme == "index") {
        doc.label_scheme = LabelScheme::index;
      } else {
        fail("invalid value for label_scheme: expected ordinal_letters or index", *v);
      }
    } else if (k == "label_prefix") {
      doc.label_prefix = as_string(*v, k);
      if (doc.label_prefix.empty() ||
          doc.label_prefix.find_first_of("/\\ .") != std::string::npos) {
        fail("invalid value for label_prefix", *v);
      }
    } else {
      fail("unknown key " + k, *v);
    }
  }
}

void parse_section(const toml::table& table, Section section, ConfigDocument& doc) {
  for (const auto& [k, v] : ordered(table)) {
    ParameterValues p;
    p.section = section;
    p.key = k;
    p.line = v->source().begin.line;
    p.column = v->source().begin.column;
    switch (section) {
      case Section::building: {
        if (k == kFloorAreaKey) {
          p.values = numeric_values(*v, k);
          break;
        }
        const BuildingKey* key = find_building_key(k);
        if (key == nullptr) fail("unknown key " + k, *v);
        switch (key->kind) {
          case KeyKind::real:
          case KeyKind::integer:
          case KeyKind::optional_real: p.values = numeric_values(*v, k); break;
          case KeyKind::flag: p.values = flag_values(*v, k); break;
          case KeyKind::weights3:
          case KeyKind::weights4: p.values = weight_values(*v, k); break;
        }
        // Type-check every value now so mistakes surface at parse time.
        BuildingConfig probe;
        for (const auto& value : p.values) {
          try {
            set_building_key(probe, k, value);
          } catch (const ConfigError& e) {
            fail(e.what(), *v);
          }
        }
        break;
      }
      case Section::control: {
        if (std::find(kControlKeys.begin(), kControlKeys.end(), k) == kControlKeys.end()) {
          fail("unknown key " + k, *v);
        }
        if (k == "kind" || k == "plugin") {
          p.values = string_values(*v, k, nullptr);
          if (k == "kind") {
            for (const auto& value : p.values) {
              try {
                parse_controller_kind(std::get<std::string>(value));
              } catch (const ConfigError& e) {
                fail(e.what(), *v);
              }
            }
          }
        } else {
          p.values = numeric_values(*v, k);
        }
        break;
      }
      case Section::paths: {
        if (std::find(kPathKeys.begin(), kPathKeys.end(), k) == kPathKeys.end()) {
          fail("unknown key " + k, *v);
        }
        p.values = string_values(*v, k, &doc.base_dir);
        break;
      }
    }
    doc.parameters.push_back(std::move(p));
  }
}

}  // namespace

std::string_view section_name(Section s) {
  switch (s) {
    case Section::building: return "building";
    case Section::control: return "control";
    case Section::paths: return "paths";
  }
  return "?";
}

std::span<const std::string_view> control_keys() { return kControlKeys; }
std::span<const std::string_view> path_keys() { return kPathKeys; }

std::vector<double> expand_range(double min, double max, double step, std::string_view key) {
  if (!(step > 0.0) || !std::isfinite(min) || !std::isfinite(max)) {
    throw ConfigError("invalid range for " + std::string(key) + ": step must be > 0");
  }
  if (max < min) throw ConfigError("invalid range for " + std::string(key) + ": max < min");
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    const double x = min + static_cast<double>(k) * step;
    if (x > max + 1e-9 * step) break;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    out.push_back(std::strtod(buf, nullptr));
    if (out.size() > 100000) {
      throw ConfigError("invalid range for " + std::string(key) + ": too many values");
    }
  }
  return out;
}

void apply_parameter(RunConfig& run, Section section, std::string_view key, const KeyValue& value) {
  const auto number = [&]() {
    const auto* x = std::get_if<double>(&value);
    if (x == nullptr) throw ConfigError("key " + std::string(key) + ": expected a number");
    return *x;
  };
  const auto text = [&]() {
    const auto* s = std::get_if<std::string>(&value);
    if (s == nullptr) throw ConfigError("key " + std::string(key) + ": expected a string");
    return *s;
  };
  switch (section) {
    case Section::building:
      if (key == kFloorAreaKey) {
        run.floor_area = number();
      } else {
        set_building_key(run.building, key, value);
      }
      return;
    case Section::control:
      if (key == "kind") {
        run.control.kind = parse_controller_kind(text());
      } else if (key == "plugin") {
        run.control.plugin = text();
      } else if (key == "day_start_h") {
        run.control.day_start_h = number();
      } else if (key == "day_end_h") {
        run.control.day_end_h = number();
      } else if (key == "proportional_band") {
        run.control.proportional_band = number();
      } else if (key == "hysteresis") {
        run.control.hysteresis = number();
      } else if (key == "update_interval") {
        run.update_interval = number();
      } else {
        throw ConfigError("unknown key " + std::string(key));
      }
      return;
    case Section::paths:
      if (key == "weather_path") {
        run.weather_path = text();
      } else if (key == "internal_gain_path") {
        run.internal_gain_path = text();
      } else if (key == "window_opening_path") {
        run.window_opening_path = text();
      } else {
        throw ConfigError("unknown key " + std::string(key));
      }
      return;
  }
}

BuildingConfig resolved_building(const RunConfig& run) {
  BuildingConfig b = run.building;
  if (run.floor_area) {
    if (!(*run.floor_area > 0.0)) throw ConfigError("invalid value for floor_area: must be > 0");
    b.zone_width = *run.floor_area / b.zone_length;
  }
  return b;
}

ControllerConfig resolved_control(const RunConfig& run, double dt) {
  ControllerConfig c = run.control;
  c.day_setpoint = run.building.roomTempUpperSetpoint;
  c.night_setpoint = run.building.roomTempLowerSetpoint;
  c.update_interval = run.update_interval.value_or(dt);
  if (c.kind == ControllerKind::internal_p && !run.building.useInternalController) {
    c.kind = ControllerKind::none;
  }
  return c;
}

ConfigDocument parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  ConfigDocument doc;
  doc.base_dir = base_dir;
  doc.output_columns = {OutputColumn::time_s,    OutputColumn::t_air_c,
                        OutputColumn::t_out_c,   OutputColumn::q_heat_w,
                        OutputColumn::u_heat,    OutputColumn::window_open,
                        OutputColumn::gains_w,   OutputColumn::sol_dir_roof_wm2,
                        OutputColumn::sol_dif_wm2};
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    const auto& src = e.source();
    throw ConfigError("config syntax error: " + std::string(e.description()) + " (line " +
                      std::to_string(src.begin.line) + ", column " +
                      std::to_string(src.begin.column) + ")");
  }

  for (const auto& [name, node] : ordered(root)) {
    const auto* table = node->as_table();
    if (table == nullptr) fail("unknown key " + name, *node);
    if (name == "simulation") {
      parse_simulation(*table, doc);
    } else if (name == "building") {
      parse_section(*table, Section::building, doc);
    } else if (name == "control") {
      parse_section(*table, Section::control, doc);
    } else if (name == "paths") {
      parse_section(*table, Section::paths, doc);
    } else if (name == "profiles") {
      parse_profiles(*table, doc.profiles);
    } else if (name == "variation") {
      parse_variation(*table, doc);
    } else {
      fail("unknown key " + name, *node);
    }
  }
  doc.profiles.seed = doc.seed;

  if (doc.mode == VariationMode::zip) {
    std::optional<std::size_t> length;
    for (const auto& p : doc.parameters) {
      if (p.values.size() <= 1) continue;
      if (length && *length != p.values.size()) {
        throw ConfigError("zip mode requires equal list lengths; key " + p.key + " has " +
                          std::to_string(p.values.size()) + " values, expected " +
                          std::to_string(*length));
      }
      length = p.values.size();
    }
  }
  return doc;
}

ConfigDocument load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open configuration file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

}  // namespace thermsynth
