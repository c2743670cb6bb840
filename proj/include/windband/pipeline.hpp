#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "windband/config.hpp"
#include "windband/error.hpp"

namespace windband {

/// Exit codes shared by every command.
enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitFit = 2, kExitPartial = 3 };

struct IngestStage {
  std::size_t samples_read = 0;
  std::size_t samples_selected = 0;
  HourlyAggregation hourly;
};

struct VariabilityStage {
  std::size_t hours_out_of_range = 0;
  std::vector<BinFit> fits;
  VariabilityModel model;
};

struct LeadStage {
  int lead = 0;
  bool ok = false;
  std::string reason;  // why the lead was skipped
  std::size_t n_errors = 0;
  std::size_t skipped_hours = 0;
  std::size_t unmatched_forecasts = 0;
  ErrorHistogram histogram;
  MixtureFit mixture;
  SingleGaussianFit single;
  GaussianMoments moments;
  SpeedUncertaintySet speed;  // at the configured forecast mean
};

struct PowerStage {
  int lead = 0;
  bool ok = false;
  SpeedUncertaintySet speed;
  PowerUncertaintySet power;
};

IngestStage ingest_measurements(const PipelineConfig& cfg);
std::vector<ForecastRecord> ingest_forecasts(const PipelineConfig& cfg);
VariabilityStage run_variability(const PipelineConfig& cfg, const IngestStage& ingest);

/// Fits one lead. Data shortfalls (no matches, too few errors, zero spread)
/// mark the lead skipped instead of throwing.
LeadStage run_lead(const PipelineConfig& cfg, std::span<const HourlyRecord> hourly,
                   std::span<const ForecastRecord> forecasts, const VariabilityModel& vm, int lead);

PowerStage run_power(const PowerCurve& curve, const VariabilityModel& vm, const MixtureFit& fit,
                     double forecast_mean, const SigmaGridConfig& grid);

PowerCurve resolve_power_curve(const PipelineConfig& cfg);

// Report builders. Keys are sorted and no wall-clock time is recorded, so
// identical inputs give byte-identical files.
nlohmann::json variability_report(const PipelineConfig& cfg, const IngestStage& ingest,
                                  const VariabilityStage& var);
nlohmann::json uncertainty_report(const PipelineConfig& cfg, const LeadStage& lead,
                                  const VariabilityModel& vm);
nlohmann::json power_report(const PipelineConfig& cfg, const PowerCurve& curve,
                            std::span<const PowerStage> stages);

/// Files produced by a command, written together once everything succeeded.
class OutputBundle {
 public:
  void add(std::string name, std::string content);
  void add_json(std::string name, const nlohmann::json& j);
  void write(const std::filesystem::path& dir) const;
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

struct CommandOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> lead;
  std::optional<double> forecast_mean;
  std::optional<std::filesystem::path> output_dir;
};

void apply_overrides(PipelineConfig& cfg, const CommandOverrides& o);

int cmd_synth(const PipelineConfig& cfg);
int cmd_fit_variability(const PipelineConfig& cfg);
int cmd_fit_uncertainty(const PipelineConfig& cfg);
int cmd_convert(const PipelineConfig& cfg);
int cmd_pipeline(const PipelineConfig& cfg);

}  // namespace windband
