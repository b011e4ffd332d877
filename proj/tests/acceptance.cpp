// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "thermsynth/batch.hpp"
#include "thermsynth/config_document.hpp"
#include "thermsynth/errors.hpp"
#include "thermsynth/simulation.hpp"
#include "thermsynth/variations.hpp"
#include "thermsynth/weather.hpp"

using namespace thermsynth;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path config_path(const char* name) { return fs::path(THERMSYNTH_DATA_DIR) / ".." / "configs" / name; }

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("thermsynth_acceptance_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const IncidentSeries& munich() {
  static const IncidentSeries s = derive_incident(load_weather(default_weather_path()), 0.2);
  return s;
}

IncidentSeries constant_weather(double t) {
  IncidentSeries s;
  s.temperature.assign(kHoursPerYear, t);
  s.incident.assign(kHoursPerYear, {});
  s.direct.assign(kHoursPerYear, {});
  s.diffuse_horizontal.assign(kHoursPerYear, 0.0);
  return s;
}

class ConstantHeat final : public Controller {
 public:
  explicit ConstantHeat(double u) : u_(u) {}
  ControlCommand on_update(const Observation&) override {
    ControlCommand c;
    c.u_heat = u_;
    return c;
  }

 private:
  double u_;
};

// 1. Ledger closure on the default building over a year.
Verdict ledger_closure() {
  const auto t0 = Clock::now();
  const ConfigDocument doc = load_config(config_path("default.toml"));
  InputCache cache(doc);
  const RunOutput out = execute_run(doc, expand_variations(doc).front(), cache);
  const double elapsed = seconds_since(t0);
  const auto& r = out.result;
  return {r.max_step_residual <= 1e-9 && r.cumulative_residual <= 1e-6 && elapsed < 10.0,
          fmt("max step residual %.2e (<= 1e-9), cumulative %.2e (<= 1e-6), %.2f s (< 10 s)",
              r.max_step_residual, r.cumulative_residual, elapsed)};
}

// 2. Constant 0 C, no sun, 2 kW heater: 30 days of stepping reach the steady-state solve.
Verdict steady_state_oracle() {
  const ModelParams params = build_model_params(BuildingConfig{});
  const IncidentSeries weather = constant_weather(0.0);
  ControllerConfig control;
  control.kind = ControllerKind::none;
  SimulationSettings s;
  s.stop = 30 * 86400.0;
  const double u = 2000.0 / params.q_heat_max;
  const auto r = simulate(params, control, RunInputs{&weather, nullptr, nullptr}, s,
                          std::make_unique<ConstantHeat>(u));
  StepInputs in;
  in.heat_command = u;
  const double oracle = steady_state(assemble_network(params), in).air();
  const double simulated = r.trace.rows.back()[static_cast<std::size_t>(OutputColumn::t_air_c)];
  const double diff = std::abs(simulated - oracle);
  return {diff <= 1e-6, fmt("simulated %.9f C, steady state %.9f C, |diff| %.2e K (<= 1e-6)",
                            simulated, oracle, diff)};
}

// 3. Single node: backward Euler equals T0 / (1 + G dt / C)^k at every step.
Verdict single_node() {
  ThermalNetwork net;
  net.capacity = {1e6};
  net.radiative_weights = {0.0};
  net.boundary_links.push_back({0, BoundaryChannel::outdoor, 100.0, -1, 0.0});
  Integrator integ(net, 60.0);
  ZoneState s{{20.0}, 0.0};
  double worst = 0.0;
  for (int k = 1; k <= 10080; ++k) {
    s = integ.advance(s, StepInputs{}).state;
    worst = std::max(worst, std::abs(s.air() - 20.0 * std::pow(1.006, -k)));
  }
  return {worst <= 1e-12, fmt("max deviation over 10080 steps %.2e K (<= 1e-12)", worst)};
}

// 4. UExt sweep: heating rises, 90th percentile indoor temperature falls.
Verdict uext_sweep() {
  const auto t0 = Clock::now();
  ConfigDocument doc = load_config(config_path("default.toml"));
  InputCache cache(doc);
  std::vector<double> heat, p90;
  for (double u : {0.1, 0.7, 1.4}) {
    Variation v = expand_variations(doc).front();
    v.run.building.UExt = u;
    const RunOutput out = execute_run(doc, v, cache);
    heat.push_back(out.result.summary.heating_kwh);
    p90.push_back(out.result.summary.air_p90);
  }
  const double elapsed = seconds_since(t0);
  const bool ok = heat[0] < heat[1] && heat[1] < heat[2] && p90[0] > p90[1] && p90[1] > p90[2] &&
                  elapsed < 60.0;
  return {ok, fmt("heating %.0f < %.0f < %.0f kWh, p90 %.3f > %.3f > %.3f C, %.1f s (< 60 s)",
                  heat[0], heat[1], heat[2], p90[0], p90[1], p90[2], elapsed)};
}

// 5. The 27-building study expands and every label decodes through the manifest.
Verdict variation_engine() {
  const auto t0 = Clock::now();
  ConfigDocument doc = load_config(config_path("tl27.toml"));
  const auto vars = expand_variations(doc);
  const double expand_s = seconds_since(t0);

  // Manifest from a one-day horizon; decoding uses only the manifest.
  doc.simulation.stop = 86400.0;
  BatchOptions opt;
  opt.out_dir = scratch("tl27_manifest");
  const Json manifest = Json::parse(
      (run_batch(doc, vars, opt), slurp(opt.out_dir / "manifest.json")));
  const auto value_of = [](const Json& run, const std::string& key) {
    return key == "floor_area" ? run["floor_area"].get<double>()
                               : run["building"][key].get<double>();
  };
  const std::vector<std::string> keys{"UExt", "heatCapacity_wall", "floor_area"};
  std::map<std::string, std::set<double>> values;
  for (const auto& run : manifest["runs"]) {
    for (const auto& k : keys) values[k].insert(value_of(run, k));
  }
  const std::regex pattern(R"(sr([0-9]+)_([abc]{3}))");
  std::size_t decoded = 0;
  std::size_t i = 0;
  for (const auto& run : manifest["runs"]) {
    ++i;
    std::smatch m;
    const std::string label = run["label"];
    if (!std::regex_match(label, m, pattern) || std::stoul(m[1]) != i) continue;
    bool ok = run["status"] == "ok";
    for (std::size_t k = 0; k < keys.size(); ++k) {
      const auto& sorted = values[keys[k]];
      const auto idx = static_cast<std::size_t>(m[2].str()[k] - 'a');
      ok = ok && idx < sorted.size() && *std::next(sorted.begin(), idx) == value_of(run, keys[k]);
    }
    if (ok) ++decoded;
  }
  const bool ok = vars.size() == 27 && manifest["runs"].size() == 27 && decoded == 27 &&
                  expand_s < 1.0;
  return {ok, fmt("%zu variations, %zu labels decoded to their parameter triple, expansion %.4f s "
                  "(< 1 s), e.g. %s",
                  vars.size(), decoded, expand_s, vars.size() > 18 ? vars[18].label.c_str() : "")};
}

// 6. Throughput: 100 one-year runs on 4 workers.
Verdict throughput() {
  const ConfigDocument doc = parse_config(R"(
[simulation]
stop = 31536000
dt = 60
output_interval = 300
[building]
UExt = {min = 0.15, max = 1.14, step = 0.01}
[control]
kind = "internal_p"
)");
  const auto vars = expand_variations(doc);
  BatchOptions opt;
  opt.jobs = 4;
  opt.out_dir = scratch("throughput");
  const auto t0 = Clock::now();
  const BatchReport rep = run_batch(doc, vars, opt);
  const double elapsed = seconds_since(t0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(opt.out_dir)) files += e.path().extension() == ".csv";
  fs::remove_all(opt.out_dir);
  const bool ok = vars.size() == 100 && rep.succeeded == 100 && files == 100 && elapsed < 750.0;
  return {ok, fmt("%zu runs, %zu CSV files, %.1f s (< 750 s), %.1fx faster than the 750 s "
                  "reference, %u hardware threads available",
                  rep.succeeded, files, elapsed, 750.0 / elapsed,
                  std::thread::hardware_concurrency())};
}

// 7. Byte-identical outputs across parallelism levels and repetitions.
Verdict determinism() {
  const ConfigDocument doc = load_config(config_path("tl27.toml"));
  const auto vars = expand_variations(doc);
  std::vector<fs::path> dirs;
  std::vector<Json> manifests;
  for (const auto& [name, jobs] : std::vector<std::pair<std::string, std::size_t>>{
           {"det_j1", 1}, {"det_j8", 8}, {"det_j8_again", 8}}) {
    BatchOptions opt;
    opt.jobs = jobs;
    opt.out_dir = scratch(name);
    manifests.push_back(without_durations(run_batch(doc, vars, opt).manifest));
    dirs.push_back(opt.out_dir);
  }
  std::size_t identical = 0;
  for (const auto& v : vars) {
    const std::string a = slurp(dirs[0] / (v.label + ".csv"));
    if (!a.empty() && a == slurp(dirs[1] / (v.label + ".csv")) &&
        a == slurp(dirs[2] / (v.label + ".csv"))) {
      ++identical;
    }
  }
  const bool manifests_equal =
      manifests[0].dump() == manifests[1].dump() && manifests[0].dump() == manifests[2].dump();
  for (const auto& d : dirs) fs::remove_all(d);
  return {identical == vars.size() && manifests_equal,
          fmt("%zu/%zu CSVs identical at jobs 1, 8, 8; manifests (without duration_s) %s",
              identical, vars.size(), manifests_equal ? "identical" : "differ")};
}

// 8. Two-point control on the coldest September day of the bundled year.
Verdict two_point_day() {
  ConfigDocument doc = load_config(config_path("two_point.toml"));
  const double sep1 = 243 * 86400.0;
  std::size_t coldest = 243;
  double coldest_mean = 1e9;
  for (std::size_t d = 243; d < 273; ++d) {
    double m = 0.0;
    for (std::size_t h = 0; h < 24; ++h) m += munich().temperature[d * 24 + h] / 24.0;
    if (m < coldest_mean) {
      coldest_mean = m;
      coldest = d;
    }
  }
  doc.simulation.start = sep1;
  doc.simulation.stop = (coldest + 1) * 86400.0;
  InputCache cache(doc);
  const RunOutput out = execute_run(doc, expand_variations(doc).front(), cache);
  const ControllerConfig control = resolved_control(expand_variations(doc).front().run, 60.0);

  // Day window of the chosen day. Heating-dominated stretches start once the air has
  // reached the lower switching threshold after the morning setpoint change and end when
  // the heater switches off for the last time that day.
  const double day0 = coldest * 86400.0;
  std::vector<const OutputRow*> rows;
  for (const auto& r : out.result.trace.rows) {
    if (r[0] >= day0 && r[0] < day0 + 86400.0) rows.push_back(&r);
  }
  int switches = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    switches += (*rows[i])[5] != (*rows[i - 1])[5];
  }
  std::size_t first = rows.size();
  std::size_t last_off = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double t = (*rows[i])[0] - day0;
    const bool day = t >= control.day_start_h * 3600.0 && t < control.day_end_h * 3600.0;
    if (!day) continue;
    if (first == rows.size() && (*rows[i])[1] >= control.day_setpoint - control.hysteresis) first = i;
    if (i > 0 && (*rows[i - 1])[5] > 0.0 && (*rows[i])[5] == 0.0) last_off = i;
  }
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::size_t i = first; i <= last_off && i < rows.size(); ++i) {
    worst = std::max(worst, std::abs((*rows[i])[1] - control.day_setpoint));
    ++checked;
  }
  const bool ok = switches >= 4 && checked > 0 && worst <= 1.0;
  return {ok, fmt("day %zu (mean %.1f C): %d switching events (>= 4), max |T - %.0f C| %.3f K "
                  "(<= 1) over %zu heating-dominated rows",
                  coldest + 1, coldest_mean, switches, control.day_setpoint, worst, checked)};
}

// 9. Bundled weather parses and passes the GHI consistency diagnostic.
Verdict epw_parsing() {
  const WeatherSeries w = load_weather(default_weather_path());
  const WeatherStats s = weather_stats(w);
  return {w.records.size() == 8760 && s.ghi_consistency_fraction >= 0.9,
          fmt("%zu records (= 8760), GHI consistent in %.1f %% of %zu daylight hours (>= 90 %%)",
              w.records.size(), 100.0 * s.ghi_consistency_fraction, s.daylight_hours)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"energy ledger closure", ledger_closure},
      {"steady-state oracle", steady_state_oracle},
      {"single-node analytic decay", single_node},
      {"UExt sweep trends", uext_sweep},
      {"variation engine", variation_engine},
      {"throughput", throughput},
      {"determinism", determinism},
      {"two-point controller day", two_point_day},
      {"EPW parsing", epw_parsing},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i + 1);
    if (!only.empty() && !only.contains(n)) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s [%d] %s: %s\n", v.pass ? "PASS" : "FAIL", n, criteria[i].first.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
