#pragma once

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace windband {

using Timestamp = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DDTHH:MM:SS` with an optional `Z` or `+00:00` suffix.
/// Any other UTC offset is rejected.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

struct WindSpeedSample {
  Timestamp timestamp;
  double speed = 0.0;  // m/s

  friend bool operator==(const WindSpeedSample&, const WindSpeedSample&) = default;
};

struct WindSpeedSeries {
  std::vector<WindSpeedSample> samples;
  std::chrono::seconds cadence{300};

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }

  friend bool operator==(const WindSpeedSeries&, const WindSpeedSeries&) = default;
};

struct SpeedCsvFormat {
  char delimiter = ',';
  std::chrono::seconds cadence{300};
};

struct ForecastCsvFormat {
  char delimiter = ',';
};

struct HourlyRecord {
  Timestamp hour_start;
  double mean_speed = 0.0;           // mu_t
  std::vector<double> intra_samples; // w_tau within the hour
  std::vector<double> deviations;    // w_tau - mu_t
};

struct HourlyAggregation {
  std::vector<HourlyRecord> records;
  std::size_t dropped_hours = 0;
  std::size_t dropped_samples = 0;
};

struct ForecastRecord {
  Timestamp target_hour;
  int lead_hours = 0;
  double forecast_mean = 0.0;  // mu_t^f

  friend bool operator==(const ForecastRecord&, const ForecastRecord&) = default;
};

struct ErrorSample {
  Timestamp target_hour;
  int lead_hours = 0;
  double error = 0.0;  // realized - forecast
};

struct ErrorAlignment {
  std::vector<ErrorSample> samples;
  std::size_t skipped_hours = 0;        // realized hours with no forecast at the lead
  std::size_t unmatched_forecasts = 0;  // forecasts at the lead with no realized hour
};

/// Season and hour-of-day window. Hours are half-open `[hour_begin, hour_end)`;
/// `hour_begin > hour_end` wraps around midnight.
struct WindowFilter {
  std::set<int> months{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  int hour_begin = 0;
  int hour_end = 24;

  void validate() const;
  bool contains(Timestamp t) const;

  static WindowFilter all() { return {}; }
};

WindSpeedSeries parse_speed_series(std::istream& in, const SpeedCsvFormat& fmt = {});
void write_speed_series(std::ostream& out, const WindSpeedSeries& series);

std::vector<ForecastRecord> parse_forecast_series(std::istream& in,
                                                  const ForecastCsvFormat& fmt = {});
void write_forecast_series(std::ostream& out, std::span<const ForecastRecord> forecasts);

WindSpeedSeries filter_window(const WindSpeedSeries& series, const WindowFilter& filter);

inline constexpr std::size_t kDefaultMinSamplesPerHour = 10;

/// Groups samples into UTC clock hours `[h, h+1)`. Hours with fewer than
/// `min_samples_per_hour` samples are dropped and counted.
HourlyAggregation aggregate_hourly(const WindSpeedSeries& series,
                                   std::size_t min_samples_per_hour = kDefaultMinSamplesPerHour);

/// Exact join on (target_hour, lead). Throws EmptyJoin when nothing matches.
ErrorAlignment align_errors(std::span<const HourlyRecord> hourly,
                            std::span<const ForecastRecord> forecasts, int lead_hours);

}  // namespace windband
