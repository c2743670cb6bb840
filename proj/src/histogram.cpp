#include "windband/histogram.hpp"

#include <algorithm>
#include <cmath>

#include "windband/error.hpp"

namespace windband {

namespace {

// Linear-interpolation quantile on sorted data.
double quantile_sorted(const std::vector<double>& s, double q) {
  double pos = q * static_cast<double>(s.size() - 1);
  auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= s.size()) return s.back();
  double frac = pos - static_cast<double>(i);
  return s[i] + frac * (s[i + 1] - s[i]);
}

}  // namespace

double ErrorHistogram::density_at(double e) const {
  if (edges.empty() || e < edges.front() || e > edges.back()) return 0.0;
  auto it = std::upper_bound(edges.begin(), edges.end(), e);
  auto i = static_cast<std::size_t>(it - edges.begin());
  if (i == 0) return 0.0;
  return density[std::min(i - 1, density.size() - 1)];
}

double ErrorHistogram::mass() const {
  double m = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) m += density[i] * width(i);
  return m;
}

void ErrorHistogram::validate() const {
  if (edges.size() < 2 || density.size() + 1 != edges.size())
    throw Error(ErrorKind::InvalidArgument, "histogram: edge/density size mismatch");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (!(edges[i] < edges[i + 1]))
      throw Error(ErrorKind::InvalidArgument, "histogram: edges must be strictly increasing");
  for (double d : density)
    if (!(d >= 0.0) || !std::isfinite(d))
      throw Error(ErrorKind::InvalidArgument, "histogram: negative or non-finite density");
  if (std::abs(mass() - 1.0) > 1e-9)
    throw Error(ErrorKind::InvalidArgument, "histogram: density does not integrate to 1");
}

double freedman_diaconis_width(std::span<const double> values) {
  if (values.size() < 2) throw Error(ErrorKind::InsufficientData, "histogram needs 2+ samples");
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  const double range = s.back() - s.front();
  if (!(range > 0.0)) throw Error(ErrorKind::ZeroRange, "error samples have zero range");
  const double iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
  const auto n = static_cast<double>(s.size());
  if (iqr > 0.0) return 2.0 * iqr / std::cbrt(n);
  return range / (std::ceil(std::log2(n)) + 1.0);
}

ErrorHistogram histogram_from_edges(std::span<const double> values, std::vector<double> edges,
                                    int lead_hours) {
  if (values.empty()) throw Error(ErrorKind::InsufficientData, "histogram needs samples");
  if (edges.size() < 2) throw Error(ErrorKind::InvalidArgument, "histogram needs 2+ edges");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (!(edges[i] < edges[i + 1]))
      throw Error(ErrorKind::InvalidArgument, "histogram edges must be strictly increasing");

  ErrorHistogram h;
  h.lead_hours = lead_hours;
  h.n_samples = values.size();
  std::vector<std::size_t> counts(edges.size() - 1, 0);
  h.sample_min = INFINITY;
  h.sample_max = -INFINITY;
  for (double v : values) {
    if (!(v >= edges.front() && v <= edges.back()))
      throw Error(ErrorKind::InvalidArgument, "sample outside histogram edges");
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    auto i = static_cast<std::size_t>(it - edges.begin()) - 1;
    ++counts[std::min(i, counts.size() - 1)];
    h.sample_min = std::min(h.sample_min, v);
    h.sample_max = std::max(h.sample_max, v);
  }
  const auto n = static_cast<double>(values.size());
  h.density.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    h.density[i] = static_cast<double>(counts[i]) / (n * (edges[i + 1] - edges[i]));
  h.edges = std::move(edges);
  return h;
}

ErrorHistogram build_error_histogram(std::span<const double> values, const HistogramConfig& cfg,
                                     int lead_hours) {
  if (values.size() < std::max<std::size_t>(cfg.min_samples, 1))
    throw Error(ErrorKind::InsufficientData,
                "histogram needs at least " + std::to_string(cfg.min_samples) + " samples, got " +
                    std::to_string(values.size()));
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) throw Error(ErrorKind::ZeroRange, "error samples have zero range");

  double w = cfg.bin_width ? *cfg.bin_width : freedman_diaconis_width(values);
  if (!(w > 0.0)) throw Error(ErrorKind::InvalidArgument, "histogram bin width must be positive");
  const double span = (hi + w) - (lo - w);
  auto n_bins = static_cast<std::size_t>(std::ceil(span / w - 1e-12));
  if (n_bins > cfg.max_bins) {
    n_bins = cfg.max_bins;
    w = span / static_cast<double>(n_bins);
  }
  std::vector<double> edges(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i) edges[i] = (lo - w) + static_cast<double>(i) * w;
  edges.back() = std::max(edges.back(), hi + w);
  return histogram_from_edges(values, std::move(edges), lead_hours);
}

ErrorHistogram build_error_histogram(std::span<const ErrorSample> errors,
                                     const HistogramConfig& cfg) {
  std::vector<double> values;
  values.reserve(errors.size());
  for (const auto& e : errors) values.push_back(e.error);
  return build_error_histogram(values, cfg, errors.empty() ? 0 : errors.front().lead_hours);
}

}  // namespace windband
