#include "windband/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "windband/error.hpp"

namespace windband {

namespace {

using namespace std::chrono;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

template <typename T>
bool parse_number(std::string_view s, T& value) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_fixed_int(std::string_view s, int& value) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return false;
  return parse_number(s, value);
}

// Reads the header and the data rows, skipping blank lines. Returns
// (line number, row text) pairs.
std::vector<std::pair<std::size_t, std::string>> read_rows(std::istream& in,
                                                           std::string_view expected_header,
                                                           char delim) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::vector<std::pair<std::size_t, std::string>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = trim(line);
    if (t.empty()) continue;
    if (!have_header) {
      auto fields = split(t, delim);
      auto want = split(expected_header, ',');
      if (fields != want)
        throw ParseError(ErrorKind::Parse, lineno,
                         "expected header '" + std::string(expected_header) + "'");
      have_header = true;
      continue;
    }
    rows.emplace_back(lineno, std::string(t));
  }
  if (rows.empty()) throw Error(ErrorKind::Parse, "empty file: no data rows");
  return rows;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  auto s = trim(text);
  if (s.ends_with('Z')) {
    s.remove_suffix(1);
  } else if (s.ends_with("+00:00")) {
    s.remove_suffix(6);
  }
  // YYYY-MM-DDTHH:MM:SS
  if (s.size() != 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') ||
      s[13] != ':' || s[16] != ':')
    throw Error(ErrorKind::Parse, "bad timestamp '" + std::string(text) + "'");
  int y, mo, d, h, mi, se;
  if (!parse_fixed_int(s.substr(0, 4), y) || !parse_fixed_int(s.substr(5, 2), mo) ||
      !parse_fixed_int(s.substr(8, 2), d) || !parse_fixed_int(s.substr(11, 2), h) ||
      !parse_fixed_int(s.substr(14, 2), mi) || !parse_fixed_int(s.substr(17, 2), se))
    throw Error(ErrorKind::Parse, "bad timestamp '" + std::string(text) + "'");
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || se > 59)
    throw Error(ErrorKind::Parse, "timestamp out of range '" + std::string(text) + "'");
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{se};
}

std::string format_timestamp(Timestamp t) {
  auto day_point = floor<days>(t);
  year_month_day ymd{day_point};
  hh_mm_ss hms{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void WindowFilter::validate() const {
  if (months.empty()) throw Error(ErrorKind::InvalidArgument, "window filter: months is empty");
  for (int m : months)
    if (m < 1 || m > 12)
      throw Error(ErrorKind::InvalidArgument, "window filter: month out of range");
  if (hour_begin < 0 || hour_begin > 24 || hour_end < 0 || hour_end > 24)
    throw Error(ErrorKind::InvalidArgument, "window filter: hour bounds must lie in [0, 24]");
  if (hour_begin == hour_end)
    throw Error(ErrorKind::InvalidArgument, "window filter: empty hour range");
}

bool WindowFilter::contains(Timestamp t) const {
  auto day_point = floor<days>(t);
  year_month_day ymd{day_point};
  int m = static_cast<int>(static_cast<unsigned>(ymd.month()));
  if (!months.contains(m)) return false;
  int h = static_cast<int>(floor<hours>(t - day_point).count());
  if (hour_begin < hour_end) return h >= hour_begin && h < hour_end;
  return h >= hour_begin || h < hour_end;
}

WindSpeedSeries parse_speed_series(std::istream& in, const SpeedCsvFormat& fmt) {
  if (fmt.cadence.count() <= 0) throw Error(ErrorKind::InvalidArgument, "cadence must be positive");
  WindSpeedSeries series;
  series.cadence = fmt.cadence;
  std::vector<std::size_t> lines;
  for (auto& [lineno, row] : read_rows(in, "timestamp,speed_mps", fmt.delimiter)) {
    auto fields = split(row, fmt.delimiter);
    if (fields.size() != 2) throw ParseError(ErrorKind::Parse, lineno, "expected 2 fields");
    Timestamp ts;
    try {
      ts = parse_timestamp(fields[0]);
    } catch (const Error& e) {
      throw ParseError(ErrorKind::Parse, lineno, e.what());
    }
    double speed;
    if (!parse_number(fields[1], speed) || !std::isfinite(speed))
      throw ParseError(ErrorKind::Parse, lineno, "non-numeric speed '" + std::string(fields[1]) + "'");
    if (speed < 0.0) throw ParseError(ErrorKind::Parse, lineno, "negative speed");
    series.samples.push_back({ts, speed});
    lines.push_back(lineno);
  }
  std::vector<std::size_t> order(series.samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return series.samples[a].timestamp < series.samples[b].timestamp;
  });
  std::vector<WindSpeedSample> sorted;
  sorted.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && series.samples[order[k]].timestamp == series.samples[order[k - 1]].timestamp)
      throw ParseError(ErrorKind::DuplicateKey, lines[order[k]],
                       "duplicate timestamp " + format_timestamp(series.samples[order[k]].timestamp));
    sorted.push_back(series.samples[order[k]]);
  }
  series.samples = std::move(sorted);
  return series;
}

void write_speed_series(std::ostream& out, const WindSpeedSeries& series) {
  out << "timestamp,speed_mps\n";
  for (const auto& s : series.samples)
    out << format_timestamp(s.timestamp) << ',' << format_double(s.speed) << '\n';
}

std::vector<ForecastRecord> parse_forecast_series(std::istream& in, const ForecastCsvFormat& fmt) {
  std::vector<ForecastRecord> out;
  std::vector<std::size_t> lines;
  for (auto& [lineno, row] : read_rows(in, "target_hour,lead_hours,forecast_mps", fmt.delimiter)) {
    auto fields = split(row, fmt.delimiter);
    if (fields.size() != 3) throw ParseError(ErrorKind::Parse, lineno, "expected 3 fields");
    ForecastRecord rec;
    try {
      rec.target_hour = parse_timestamp(fields[0]);
    } catch (const Error& e) {
      throw ParseError(ErrorKind::Parse, lineno, e.what());
    }
    if (!parse_number(fields[1], rec.lead_hours))
      throw ParseError(ErrorKind::Parse, lineno, "lead_hours must be an integer");
    if (rec.lead_hours < 0) throw ParseError(ErrorKind::Parse, lineno, "negative lead time");
    if (!parse_number(fields[2], rec.forecast_mean) || !std::isfinite(rec.forecast_mean))
      throw ParseError(ErrorKind::Parse, lineno, "non-numeric forecast");
    if (rec.forecast_mean < 0.0) throw ParseError(ErrorKind::Parse, lineno, "negative forecast");
    out.push_back(rec);
    lines.push_back(lineno);
  }
  std::vector<std::size_t> order(out.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto key = [&](std::size_t i) { return std::pair(out[i].target_hour, out[i].lead_hours); };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  std::vector<ForecastRecord> sorted;
  sorted.reserve(out.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && key(order[k]) == key(order[k - 1]))
      throw ParseError(ErrorKind::DuplicateKey, lines[order[k]],
                       "duplicate (target_hour, lead_hours) pair");
    sorted.push_back(out[order[k]]);
  }
  return sorted;
}

void write_forecast_series(std::ostream& out, std::span<const ForecastRecord> forecasts) {
  out << "target_hour,lead_hours,forecast_mps\n";
  for (const auto& f : forecasts)
    out << format_timestamp(f.target_hour) << ',' << f.lead_hours << ','
        << format_double(f.forecast_mean) << '\n';
}

WindSpeedSeries filter_window(const WindSpeedSeries& series, const WindowFilter& filter) {
  filter.validate();
  WindSpeedSeries out;
  out.cadence = series.cadence;
  std::copy_if(series.samples.begin(), series.samples.end(), std::back_inserter(out.samples),
               [&](const WindSpeedSample& s) { return filter.contains(s.timestamp); });
  if (out.empty()) throw Error(ErrorKind::EmptySelection, "window filter selected no samples");
  return out;
}

HourlyAggregation aggregate_hourly(const WindSpeedSeries& series, std::size_t min_samples_per_hour) {
  if (series.cadence.count() <= 0 || 3600 % series.cadence.count() != 0)
    throw Error(ErrorKind::InvalidArgument, "cadence must divide one hour");

  HourlyAggregation agg;
  auto flush = [&](Timestamp hour, std::vector<double>& speeds) {
    if (speeds.empty()) return;
    if (speeds.size() < min_samples_per_hour) {
      ++agg.dropped_hours;
      agg.dropped_samples += speeds.size();
      speeds.clear();
      return;
    }
    HourlyRecord rec;
    rec.hour_start = hour;
    double sum = 0.0;
    for (double v : speeds) sum += v;
    rec.mean_speed = sum / static_cast<double>(speeds.size());
    rec.deviations.reserve(speeds.size());
    for (double v : speeds) rec.deviations.push_back(v - rec.mean_speed);
    rec.intra_samples = std::move(speeds);
    speeds = {};
    agg.records.push_back(std::move(rec));
  };

  std::vector<double> current;
  Timestamp current_hour{};
  for (const auto& s : series.samples) {
    auto hour = floor<hours>(s.timestamp);
    if (current.empty() || hour != current_hour) {
      flush(current_hour, current);
      current_hour = hour;
    }
    current.push_back(s.speed);
  }
  flush(current_hour, current);
  return agg;
}

ErrorAlignment align_errors(std::span<const HourlyRecord> hourly,
                            std::span<const ForecastRecord> forecasts, int lead_hours) {
  if (lead_hours < 0) throw Error(ErrorKind::InvalidArgument, "lead must be nonnegative");
  std::map<Timestamp, double> at_lead;
  for (const auto& f : forecasts)
    if (f.lead_hours == lead_hours) at_lead.emplace(f.target_hour, f.forecast_mean);

  ErrorAlignment out;
  std::size_t matched = 0;
  for (const auto& h : hourly) {
    auto it = at_lead.find(h.hour_start);
    if (it == at_lead.end()) {
      ++out.skipped_hours;
      continue;
    }
    out.samples.push_back({h.hour_start, lead_hours, h.mean_speed - it->second});
    ++matched;
  }
  out.unmatched_forecasts = at_lead.size() - matched;
  if (out.samples.empty())
    throw Error(ErrorKind::EmptyJoin,
                "no realized hour matched a forecast at lead " + std::to_string(lead_hours));
  return out;
}

}  // namespace windband
