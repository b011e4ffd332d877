#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thermsynth/building_config.hpp"
#include "thermsynth/control.hpp"
#include "thermsynth/profiles.hpp"
#include "thermsynth/simulation.hpp"

namespace thermsynth {

enum class VariationMode { cartesian, zip };
enum class LabelScheme { ordinal_letters, index };

/// Sections whose keys may carry several values.
enum class Section { building, control, paths };
std::string_view section_name(Section s);

/// One configured key with all of its values, in document order.
struct ParameterValues {
  Section section = Section::building;
  std::string key;
  std::vector<KeyValue> values;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct ConfigDocument {
  SimulationSettings simulation;
  std::vector<OutputColumn> output_columns;
  std::uint64_t seed = 0;
  std::vector<ParameterValues> parameters;
  ProfileSettings profiles;
  VariationMode mode = VariationMode::cartesian;
  LabelScheme label_scheme = LabelScheme::ordinal_letters;
  std::string label_prefix = "sr";
  std::filesystem::path base_dir;  // relative paths resolve against this
};

/// Everything one simulation run needs besides the shared inputs.
struct RunConfig {
  BuildingConfig building;
  ControllerConfig control;
  std::optional<double> update_interval;  // unset: simulation dt
  std::optional<double> floor_area;       // when set, zone_width = floor_area / zone_length
  std::string weather_path;
  std::string internal_gain_path;
  std::string window_opening_path;
};

/// Keys accepted in the [control] and [paths] sections.
std::span<const std::string_view> control_keys();
std::span<const std::string_view> path_keys();

/// Applies one key to a run configuration. Throws ConfigError on mismatch.
void apply_parameter(RunConfig& run, Section section, std::string_view key, const KeyValue& value);

/// Building with floor_area applied and controller setpoints tied to the building.
BuildingConfig resolved_building(const RunConfig& run);
ControllerConfig resolved_control(const RunConfig& run, double dt);

/// Parses TOML text. Unknown keys are rejected with their name and location.
ConfigDocument parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ConfigDocument load_config(const std::filesystem::path& path);

/// min, min+step, … ≤ max; values rounded to 12 significant digits.
std::vector<double> expand_range(double min, double max, double step, std::string_view key);

}  // namespace thermsynth
