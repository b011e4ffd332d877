#include "thermsynth/batch.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <thread>

#include "thermsynth/errors.hpp"
#include "thermsynth/output_csv.hpp"

namespace thermsynth {

namespace fs = std::filesystem;

fs::path default_weather_path() {
  return fs::path(THERMSYNTH_DATA_DIR) / "weather" / "DEU_Munich_synthetic.epw";
}

std::shared_ptr<const IncidentSeries> InputCache::weather(const std::string& path, double albedo) {
  const std::string resolved = path.empty() ? default_weather_path().string() : path;
  std::lock_guard lock(mutex_);
  if (auto it = weather_.find({resolved, albedo}); it != weather_.end()) return it->second;
  auto& raw = raw_weather_[resolved];
  if (!raw) raw = std::make_shared<const WeatherSeries>(load_weather(resolved));
  auto incident = std::make_shared<const IncidentSeries>(derive_incident(*raw, albedo));
  weather_[{resolved, albedo}] = incident;
  return incident;
}

std::shared_ptr<const YearProfile> InputCache::profile(const std::string& path) {
  std::lock_guard lock(mutex_);
  auto& slot = profiles_[path];
  if (!slot) {
    slot = std::make_shared<const YearProfile>(path.empty() ? generate_year_profile(doc_.profiles)
                                                            : load_profile_csv(path));
  }
  return slot;
}

namespace {
RunOutput execute_run_unlabelled(const ConfigDocument& doc, const Variation& variation,
                                 InputCache& cache);
}  // namespace

RunOutput execute_run(const ConfigDocument& doc, const Variation& variation, InputCache& cache) {
  try {
    return execute_run_unlabelled(doc, variation, cache);
  } catch (const std::exception& e) {
    throw SimulationError("run " + variation.label + ": " + e.what());
  }
}

namespace {

RunOutput execute_run_unlabelled(const ConfigDocument& doc, const Variation& variation,
                                 InputCache& cache) {
  const BuildingConfig building = resolved_building(variation.run);
  const ControllerConfig control = resolved_control(variation.run, doc.simulation.dt);
  RunOutput out;
  out.params = build_model_params(building);
  const auto weather = cache.weather(variation.run.weather_path, building.albedo);
  const auto gains = cache.profile(variation.run.internal_gain_path);
  const auto window = cache.profile(variation.run.window_opening_path);
  RunInputs inputs;
  inputs.weather = weather.get();
  inputs.gains = gains.get();
  inputs.window = window.get();
  out.result = simulate(out.params, control, inputs, doc.simulation);
  return out;
}

Json key_value_json(const KeyValue& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

template <std::size_t N>
std::array<double, N> array_from(const Json& j) {
  std::array<double, N> a{};
  if (j.size() != N) throw ParseError("manifest array has wrong length");
  for (std::size_t i = 0; i < N; ++i) a[i] = j.at(i).get<double>();
  return a;
}

Json control_json(const ControllerConfig& c) {
  Json j;
  j["kind"] = controller_kind_name(c.kind);
  j["plugin"] = c.plugin;
  j["day_setpoint"] = c.day_setpoint;
  j["night_setpoint"] = c.night_setpoint;
  j["day_start_h"] = c.day_start_h;
  j["day_end_h"] = c.day_end_h;
  j["proportional_band"] = c.proportional_band;
  j["hysteresis"] = c.hysteresis;
  j["update_interval"] = c.update_interval;
  return j;
}

Json summary_json(const SimulationResult& r) {
  Json j;
  j["heating_kwh"] = r.summary.heating_kwh;
  j["cooling_kwh"] = r.summary.cooling_kwh;
  j["t_air_p10"] = r.summary.air_p10;
  j["t_air_p50"] = r.summary.air_p50;
  j["t_air_p90"] = r.summary.air_p90;
  j["t_air_mean"] = r.summary.air_mean;
  j["steps"] = r.steps;
  j["controller_updates"] = r.controller_updates;
  j["max_step_residual"] = r.max_step_residual;
  j["cumulative_residual"] = r.cumulative_residual;
  return j;
}

struct RunRecord {
  std::string status = "ok";
  std::string error;
  double duration_s = 0.0;
  Json entry;
};

RunRecord process(const ConfigDocument& doc, const Variation& v, InputCache& cache,
                  const BatchOptions& options) {
  RunRecord rec;
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path target = options.out_dir / (v.label + ".csv");

  Json e;
  e["label"] = v.label;
  e["status"] = nullptr;
  e["error"] = nullptr;
  e["output_file"] = target.filename().string();
  e["seed"] = doc.seed;
  Json axes = Json::array();
  for (const auto& a : v.axes) {
    axes.push_back({{"section", section_name(a.section)},
                    {"key", a.key},
                    {"index", a.index},
                    {"rank", a.rank},
                    {"value", key_value_json(a.value)}});
  }
  e["axes"] = axes;
  e["building"] = building_to_json(v.run.building);
  e["floor_area"] = v.run.floor_area ? Json(*v.run.floor_area) : Json(nullptr);
  e["paths"] = {{"weather", v.run.weather_path.empty() ? default_weather_path().filename().string()
                                                         : v.run.weather_path},
                {"internal_gains", v.run.internal_gain_path.empty() ? Json("generated")
                                                                    : Json(v.run.internal_gain_path)},
                {"window_opening", v.run.window_opening_path.empty()
                                       ? Json("generated")
                                       : Json(v.run.window_opening_path)}};
  e["control"] = nullptr;
  e["derived"] = nullptr;
  e["summary"] = nullptr;

  try {
    const BuildingConfig building = resolved_building(v.run);
    e["building"] = building_to_json(building);
    e["control"] = control_json(resolved_control(v.run, doc.simulation.dt));
    if (options.skip_existing && fs::exists(target)) {
      e["derived"] = model_params_to_json(build_model_params(building));
      rec.status = "skipped";
    } else {
      const RunOutput out = execute_run(doc, v, cache);
      e["derived"] = model_params_to_json(out.params);
      write_output_csv(out.result.trace, doc.output_columns, target);
      e["summary"] = summary_json(out.result);
    }
  } catch (const std::exception& ex) {
    rec.status = "failed";
    rec.error = ex.what();
    e["error"] = rec.error;
    e["output_file"] = nullptr;
  }
  e["status"] = rec.status;
  rec.duration_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  e["duration_s"] = rec.duration_s;
  rec.entry = std::move(e);
  return rec;
}

}  // namespace

Json building_to_json(const BuildingConfig& building) {
  Json j = Json::object();
  for (const auto& key : building_keys()) {
    const KeyValue v = get_building_key(building, key.name);
    if (key.kind == KeyKind::optional_real && std::holds_alternative<std::vector<double>>(v)) {
      j[std::string(key.name)] = nullptr;
    } else {
      j[std::string(key.name)] = key_value_json(v);
    }
  }
  return j;
}

BuildingConfig building_from_json(const Json& j) {
  BuildingConfig b;
  for (const auto& key : building_keys()) {
    const std::string name(key.name);
    if (!j.contains(name)) throw ParseError("manifest lacks building key " + name);
    const Json& v = j.at(name);
    switch (key.kind) {
      case KeyKind::real:
      case KeyKind::integer: set_building_key(b, name, v.get<double>()); break;
      case KeyKind::optional_real:
        if (v.is_null()) {
          set_building_key(b, name, std::vector<double>{});
        } else {
          set_building_key(b, name, v.get<double>());
        }
        break;
      case KeyKind::flag: set_building_key(b, name, v.get<bool>()); break;
      case KeyKind::weights3:
      case KeyKind::weights4: set_building_key(b, name, v.get<std::vector<double>>()); break;
    }
  }
  return b;
}

Json model_params_to_json(const ModelParams& p) {
  Json j;
  const Geometry& g = p.geometry;
  j["geometry"] = {{"volume", g.volume},
                   {"area_floor", g.area_floor},
                   {"area_roof", g.area_roof},
                   {"area_wall_gross", g.area_wall_gross},
                   {"area_facade_gross", g.area_facade_gross},
                   {"area_window", g.area_window},
                   {"area_wall_net", g.area_wall_net},
                   {"area_internal_mass", g.area_internal_mass},
                   {"area_ceilings", g.area_ceilings}};
  j["q_heat_max"] = p.q_heat_max;
  j["q_cool_max"] = p.q_cool_max;
  j["node_count"] = 1 + 3 * static_cast<std::size_t>(std::count_if(
                            p.chains.begin(), p.chains.end(), [&](const RcChain& c) {
                              return c.component != Component::internal_mass || p.has_internal_mass;
                            }));
  j["air_capacity"] = p.air_capacity;
  j["air_change_rate"] = p.air_change_rate;
  j["heat_recovery_rate"] = p.heat_recovery_rate;
  j["ventilation_conductance"] = p.ventilation_conductance(p.air_change_rate);
  j["window_conductance"] = p.window_conductance;
  j["window_solar_aperture"] = p.window_solar_aperture;
  j["has_internal_mass"] = p.has_internal_mass;
  j["heating_convective_fraction"] = p.heating_convective_fraction;
  j["gains_convective_fraction"] = p.gains_convective_fraction;
  j["ground_temperature"] = p.ground_temperature;
  j["solar_absorptance"] = p.solar_absorptance;
  j["albedo"] = p.albedo;
  j["openable_window_area"] = p.openable_window_area;
  j["openable_window_height"] = p.openable_window_height;
  Json chains = Json::array();
  for (const auto& c : p.chains) {
    chains.push_back({{"component", component_name(c.component)},
                      {"boundary", static_cast<int>(c.boundary)},
                      {"area", c.area},
                      {"surface_area", c.surface_area},
                      {"orientation", c.orientation},
                      {"capacities", c.capacities},
                      {"segment_resistances", c.segment_resistances},
                      {"inner_film", c.inner_film},
                      {"outer_film", c.outer_film}});
  }
  j["chains"] = chains;
  return j;
}

ModelParams model_params_from_json(const Json& j) {
  ModelParams p;
  const Json& g = j.at("geometry");
  p.geometry.volume = g.at("volume").get<double>();
  p.geometry.area_floor = g.at("area_floor").get<double>();
  p.geometry.area_roof = g.at("area_roof").get<double>();
  p.geometry.area_wall_gross = g.at("area_wall_gross").get<double>();
  p.geometry.area_facade_gross = array_from<4>(g.at("area_facade_gross"));
  p.geometry.area_window = array_from<4>(g.at("area_window"));
  p.geometry.area_wall_net = array_from<4>(g.at("area_wall_net"));
  p.geometry.area_internal_mass = g.at("area_internal_mass").get<double>();
  p.geometry.area_ceilings = g.at("area_ceilings").get<double>();
  p.q_heat_max = j.at("q_heat_max").get<double>();
  p.q_cool_max = j.at("q_cool_max").get<double>();
  p.air_capacity = j.at("air_capacity").get<double>();
  p.air_change_rate = j.at("air_change_rate").get<double>();
  p.heat_recovery_rate = j.at("heat_recovery_rate").get<double>();
  p.window_conductance = array_from<4>(j.at("window_conductance"));
  p.window_solar_aperture = array_from<4>(j.at("window_solar_aperture"));
  p.has_internal_mass = j.at("has_internal_mass").get<bool>();
  p.heating_convective_fraction = j.at("heating_convective_fraction").get<double>();
  p.gains_convective_fraction = j.at("gains_convective_fraction").get<double>();
  p.ground_temperature = j.at("ground_temperature").get<double>();
  p.solar_absorptance = j.at("solar_absorptance").get<double>();
  p.albedo = j.at("albedo").get<double>();
  p.openable_window_area = j.at("openable_window_area").get<double>();
  p.openable_window_height = j.at("openable_window_height").get<double>();
  const Json& chains = j.at("chains");
  if (chains.size() != kComponentCount) throw ParseError("manifest chain count mismatch");
  for (std::size_t i = 0; i < kComponentCount; ++i) {
    const Json& c = chains.at(i);
    RcChain& r = p.chains[i];
    r.component = static_cast<Component>(i);
    r.boundary = static_cast<Boundary>(c.at("boundary").get<int>());
    r.area = c.at("area").get<double>();
    r.surface_area = c.at("surface_area").get<double>();
    r.orientation = c.at("orientation").get<int>();
    r.capacities = array_from<3>(c.at("capacities"));
    r.segment_resistances = array_from<4>(c.at("segment_resistances"));
    r.inner_film = c.at("inner_film").get<double>();
    r.outer_film = c.at("outer_film").get<double>();
  }
  return p;
}

BatchReport run_batch(const ConfigDocument& doc, const std::vector<Variation>& variations,
                      const BatchOptions& options) {
  fs::create_directories(options.out_dir);
  InputCache cache(doc);
  std::vector<RunRecord> records(variations.size());
  std::atomic<std::size_t> next{0};
  const auto t0 = std::chrono::steady_clock::now();
  {
    const std::size_t workers =
        std::max<std::size_t>(1, std::min(options.jobs, variations.size()));
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < variations.size(); i = next++) {
          records[i] = process(doc, variations[i], cache, options);
        }
      });
    }
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  BatchReport report;
  Json m;
  m["format"] = "thermsynth-manifest/1";
  m["version"] = THERMSYNTH_VERSION;
  m["simulation"] = {{"start", doc.simulation.start},
                     {"stop", doc.simulation.stop},
                     {"dt", doc.simulation.dt},
                     {"output_interval", doc.simulation.output_interval}};
  Json cols = Json::array();
  for (auto c : doc.output_columns) cols.push_back(column_names()[static_cast<std::size_t>(c)]);
  m["output_columns"] = cols;
  m["seed"] = doc.seed;
  m["variation"] = {{"mode", doc.mode == VariationMode::zip ? "zip" : "cartesian"},
                    {"label_scheme",
                     doc.label_scheme == LabelScheme::index ? "index" : "ordinal_letters"}};
  Json runs = Json::array();
  for (auto& r : records) {
    if (r.status == "ok") ++report.succeeded;
    if (r.status == "skipped") ++report.skipped;
    if (r.status == "failed") ++report.failed;
    runs.push_back(std::move(r.entry));
  }
  m["run_count"] = variations.size();
  m["failed_count"] = report.failed;
  m["duration_s"] = wall;
  m["runs"] = std::move(runs);

  const fs::path manifest_path = options.out_dir / "manifest.json";
  fs::path tmp = manifest_path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SimulationError("cannot write " + tmp.string());
    out << m.dump(2) << '\n';
    if (!out) throw SimulationError("cannot write " + tmp.string());
  }
  fs::rename(tmp, manifest_path);
  report.manifest = std::move(m);
  return report;
}

Json without_durations(Json manifest) {
  manifest.erase("duration_s");
  if (manifest.contains("runs")) {
    for (auto& r : manifest["runs"]) r.erase("duration_s");
  }
  return manifest;
}

}  // namespace thermsynth
