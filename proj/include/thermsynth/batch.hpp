#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "thermsynth/config_document.hpp"
#include "thermsynth/variations.hpp"

namespace thermsynth {

using Json = nlohmann::ordered_json;

/// Weather file bundled with the project; used when no weather_path is configured.
std::filesystem::path default_weather_path();

/// Read-only inputs shared between runs. Safe for concurrent use.
class InputCache {
 public:
  explicit InputCache(const ConfigDocument& doc) : doc_(doc) {}

  std::shared_ptr<const IncidentSeries> weather(const std::string& path, double albedo);
  /// Internal gains and window schedule; generated from [profiles] when the path is empty.
  std::shared_ptr<const YearProfile> profile(const std::string& path);

 private:
  const ConfigDocument& doc_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const WeatherSeries>> raw_weather_;
  std::map<std::pair<std::string, double>, std::shared_ptr<const IncidentSeries>> weather_;
  std::map<std::string, std::shared_ptr<const YearProfile>> profiles_;
};

struct RunOutput {
  ModelParams params;
  SimulationResult result;
};

/// Resolves, validates and simulates one variation.
RunOutput execute_run(const ConfigDocument& doc, const Variation& variation, InputCache& cache);

Json building_to_json(const BuildingConfig& building);
BuildingConfig building_from_json(const Json& j);
Json model_params_to_json(const ModelParams& params);
ModelParams model_params_from_json(const Json& j);

struct BatchOptions {
  std::size_t jobs = 1;
  std::filesystem::path out_dir;
  bool skip_existing = false;
};

struct BatchReport {
  std::size_t succeeded = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;
  Json manifest;
};

/// Simulates every variation on `jobs` workers, writes `{label}.csv` files and
/// `manifest.json` into out_dir. Per-run failures are recorded, not thrown.
BatchReport run_batch(const ConfigDocument& doc, const std::vector<Variation>& variations,
                      const BatchOptions& options);

/// Removes wall-clock fields so manifests can be compared byte for byte.
Json without_durations(Json manifest);

}  // namespace thermsynth
