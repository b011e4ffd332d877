#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "thermsynth/batch.hpp"
#include "thermsynth/config_document.hpp"
#include "thermsynth/errors.hpp"
#include "thermsynth/output_csv.hpp"
#include "thermsynth/validation.hpp"
#include "thermsynth/variations.hpp"

namespace ts = thermsynth;

namespace {

int cmd_simulate(const std::string& config, const std::string& out, const std::string& label) {
  const ts::ConfigDocument doc = ts::load_config(config);
  const auto variations = ts::expand_variations(doc);
  const ts::Variation* chosen = nullptr;
  if (!label.empty()) {
    for (const auto& v : variations) {
      if (v.label == label) chosen = &v;
    }
    if (chosen == nullptr) throw ts::ConfigError("no variation labelled " + label);
  } else if (variations.size() == 1) {
    chosen = &variations.front();
  } else {
    throw ts::ConfigError("configuration expands to " + std::to_string(variations.size()) +
                          " variations; pass --label or use batch");
  }
  ts::InputCache cache(doc);
  const ts::RunOutput run = ts::execute_run(doc, *chosen, cache);
  if (out.empty() || out == "-") {
    ts::write_output_csv(run.result.trace, doc.output_columns, std::cout);
  } else {
    ts::write_output_csv(run.result.trace, doc.output_columns, std::filesystem::path(out));
  }
  const auto& s = run.result.summary;
  std::fprintf(stderr,
               "%s: heating %.1f kWh, cooling %.1f kWh, air p10/p50/p90 %.2f/%.2f/%.2f C, "
               "max step residual %.2e\n",
               chosen->label.c_str(), s.heating_kwh, s.cooling_kwh, s.air_p10, s.air_p50,
               s.air_p90, run.result.max_step_residual);
  return 0;
}

int cmd_batch(const std::string& config, std::size_t jobs, const std::string& out, bool skip) {
  const ts::ConfigDocument doc = ts::load_config(config);
  const auto variations = ts::expand_variations(doc);
  ts::BatchOptions options;
  options.jobs = jobs;
  options.out_dir = out;
  options.skip_existing = skip;
  const ts::BatchReport report = ts::run_batch(doc, variations, options);
  std::fprintf(stderr, "%zu runs: %zu ok, %zu skipped, %zu failed (%.1f s)\n", variations.size(),
               report.succeeded, report.skipped, report.failed,
               report.manifest["duration_s"].get<double>());
  for (const auto& r : report.manifest["runs"]) {
    if (r["status"] == "failed") {
      std::fprintf(stderr, "  %s: %s\n", r["label"].get<std::string>().c_str(),
                   r["error"].get<std::string>().c_str());
    }
  }
  return report.failed == 0 ? 0 : 1;
}

int cmd_gen_profiles(const std::string& config, const std::string& out) {
  const ts::ConfigDocument doc = ts::load_config(config);
  const ts::YearProfile profile = ts::generate_year_profile(doc.profiles);
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file) throw ts::SimulationError("cannot write " + out);
  ts::write_profile_csv(profile, file);
  if (!file) throw ts::SimulationError("cannot write " + out);
  return 0;
}

int cmd_inspect_weather(const std::string& path) {
  const ts::WeatherSeries w = ts::load_weather(path);
  const ts::WeatherStats s = ts::weather_stats(w);
  std::printf("site            %s\n", w.site.city.c_str());
  std::printf("latitude        %.3f\n", w.site.latitude);
  std::printf("longitude       %.3f\n", w.site.longitude);
  std::printf("timezone        %+.1f h\n", w.site.timezone);
  std::printf("records         %zu\n", w.records.size());
  std::printf("temperature     mean %.2f C, min %.1f C, max %.1f C\n", s.mean_temperature,
              s.min_temperature, s.max_temperature);
  std::printf("irradiation     GHI %.0f, DNI %.0f, DHI %.0f kWh/m2\n", s.ghi_kwh_m2, s.dni_kwh_m2,
              s.dhi_kwh_m2);
  std::printf("daylight hours  %zu\n", s.daylight_hours);
  std::printf("GHI consistent  %.1f %% of daylight hours\n", 100.0 * s.ghi_consistency_fraction);
  return 0;
}

int cmd_validate() {
  int failed = 0;
  for (const auto& r : ts::run_oracle_suite()) {
    std::printf("%s  %-48s expected %.10g, got %.10g (tol %.1e)\n", r.passed ? "PASS" : "FAIL",
                r.name.c_str(), r.expected, r.actual, r.tolerance);
    if (!r.passed) ++failed;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic building thermal data generator"};
  app.set_version_flag("--version", std::string("thermsynth ") + THERMSYNTH_VERSION);
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::string label;
  std::size_t jobs = 1;
  bool skip_existing = false;

  auto* simulate = app.add_subcommand("simulate", "Run a single variation");
  simulate->add_option("config", config, "Configuration file")->required();
  simulate->add_option("--out", out, "Output CSV (default: stdout)");
  simulate->add_option("--label", label, "Variation to run when the config expands to several");

  auto* batch = app.add_subcommand("batch", "Run every variation and write a manifest");
  batch->add_option("config", config, "Configuration file")->required();
  batch->add_option("--jobs,-j", jobs, "Worker threads")->check(CLI::PositiveNumber);
  batch->add_option("--out", out, "Output directory")->required();
  batch->add_flag("--skip-existing", skip_existing, "Skip labels whose CSV already exists");

  auto* gen = app.add_subcommand("gen-profiles", "Write the yearly gains/window profile");
  gen->add_option("config", config, "Configuration file")->required();
  gen->add_option("--out", out, "Output CSV")->required();

  std::string weather;
  auto* inspect = app.add_subcommand("inspect-weather", "Print site and annual weather statistics");
  inspect->add_option("weather", weather, "EPW or CSV weather file")->required();

  auto* validate = app.add_subcommand("validate", "Run the analytic oracle suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*simulate) return cmd_simulate(config, out, label);
    if (*batch) return cmd_batch(config, jobs, out, skip_existing);
    if (*gen) return cmd_gen_profiles(config, out);
    if (*inspect) return cmd_inspect_weather(weather);
    if (*validate) return cmd_validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
