// windband: wind power uncertainty sets from wind-speed measurements and
// forecasts.
//
//   windband synth|fit-variability|fit-uncertainty|convert|pipeline
//            --config <path> [--seed N] [--lead H] [--forecast-mean V] [--out DIR]

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "windband/pipeline.hpp"

int main(int argc, char** argv) {
  using namespace windband;

  CLI::App app{"Wind power generation uncertainty sets"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string config_path;
  CommandOverrides overrides;
  std::uint64_t seed = 0;
  int lead = 0;
  double forecast_mean = 0.0;
  std::string out_dir;

  const std::map<std::string, std::pair<std::string, std::function<int(const PipelineConfig&)>>>
      commands{
          {"synth", {"Generate synthetic measurement and forecast files", cmd_synth}},
          {"fit-variability", {"Fit the intra-hour variability law", cmd_fit_variability}},
          {"fit-uncertainty", {"Fit per-lead forecast-error mixture bounds", cmd_fit_uncertainty}},
          {"convert", {"Convert fitted speed sets to power sets", cmd_convert}},
          {"pipeline", {"Run every stage and write the consolidated report", cmd_pipeline}},
      };

  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", config_path, "Pipeline configuration JSON")->required();
    sub->add_option("--seed", seed, "Random seed for synthetic data");
    sub->add_option("--lead", lead, "Restrict to a single lead time in hours")
        ->check(CLI::PositiveNumber);
    sub->add_option("--forecast-mean", forecast_mean, "Forecast hourly mean wind speed (m/s)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out", out_dir, "Output directory");
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // usage errors share the input-error exit code
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    if (sub->count("--seed")) overrides.seed = seed;
    if (sub->count("--lead")) overrides.lead = lead;
    if (sub->count("--forecast-mean")) overrides.forecast_mean = forecast_mean;
    if (sub->count("--out")) overrides.output_dir = out_dir;
    try {
      auto cfg = load_config(config_path);
      apply_overrides(cfg, overrides);
      const int code = commands.at(name).second(cfg);
      if (code == kExitPartial) std::cerr << "windband: some leads were skipped\n";
      if (code == kExitFit) std::cerr << "windband: no lead could be fitted\n";
      return code;
    } catch (const Error& e) {
      std::cerr << "windband: " << to_string(e.kind()) << " error: " << e.what() << '\n';
      return exit_code_for(e.kind());
    } catch (const std::exception& e) {
      std::cerr << "windband: " << e.what() << '\n';
      return kExitInput;
    }
  }
  return kExitInput;
}
