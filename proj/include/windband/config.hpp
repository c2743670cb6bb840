#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "windband/histogram.hpp"
#include "windband/power.hpp"
#include "windband/synth.hpp"
#include "windband/timeseries.hpp"
#include "windband/uncertainty.hpp"
#include "windband/variability.hpp"

namespace windband {

inline constexpr const char* kToolVersion = "0.1.0";

struct PipelineConfig {
  std::filesystem::path measurement_path;
  std::filesystem::path forecast_path;
  std::optional<std::filesystem::path> power_curve_path;   // default curve when absent
  std::optional<std::filesystem::path> variability_path;   // inline fit when absent
  std::filesystem::path output_dir = "out";

  WindowFilter window;
  BinConfig bins;
  std::size_t min_samples_per_hour = kDefaultMinSamplesPerHour;
  std::size_t min_hours_per_bin = kDefaultMinHoursPerBin;
  double sigma_floor = kDefaultSigmaFloor;
  std::vector<int> leads{1};
  HistogramConfig histogram;
  QuadratureConfig quadrature;
  SearchConfig search;
  SigmaGridConfig sigma_grid;
  double forecast_mean = 10.0;
  double plot_histogram_width = 0.25;  // only for the intra-hour histogram export
  std::uint64_t seed = 42;
  SyntheticSpec synthetic;              // seed and window follow the fields above

  void validate() const;
  /// Rewrites relative paths against `base`.
  void resolve_paths(const std::filesystem::path& base);
  SyntheticSpec synthetic_spec() const;
};

/// Strict parse: unknown keys at any level are rejected with a Config error.
PipelineConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const PipelineConfig& cfg);

/// Reads the file and resolves relative paths against its directory.
PipelineConfig load_config(const std::filesystem::path& path);

PowerCurve power_curve_from_json(const nlohmann::json& j);
nlohmann::json power_curve_to_json(const PowerCurve& c);
PowerCurve load_power_curve(const std::filesystem::path& path);

VariabilityModel variability_model_from_json(const nlohmann::json& j);
nlohmann::json variability_model_to_json(const VariabilityModel& m);

}  // namespace windband
