#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "windband/timeseries.hpp"

namespace windband {

/// Empirical forecast-error density f^E. `density[i]` covers
/// `[edges[i], edges[i+1])`, the last bin is closed on the right.
struct ErrorHistogram {
  int lead_hours = 0;
  std::vector<double> edges;
  std::vector<double> density;
  std::size_t n_samples = 0;
  double sample_min = 0.0;
  double sample_max = 0.0;

  std::size_t bin_count() const { return density.size(); }
  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
  /// Piecewise-constant density, zero outside the edges.
  double density_at(double e) const;
  /// Integral of the density; 1 for a valid histogram.
  double mass() const;
  void validate() const;
};

struct HistogramConfig {
  std::optional<double> bin_width;  // nullopt: Freedman-Diaconis
  std::size_t min_samples = 30;
  std::size_t max_bins = 5000;
};

/// Freedman-Diaconis width 2 * IQR * n^(-1/3). Falls back to Sturges when
/// the interquartile range is zero. Throws ZeroRange for constant data.
double freedman_diaconis_width(std::span<const double> values);

/// Counts samples into the given strictly increasing edges and normalizes
/// by total count and bin width. Samples outside the edges are rejected.
ErrorHistogram histogram_from_edges(std::span<const double> values, std::vector<double> edges,
                                    int lead_hours = 0);

/// Edges start at min - w and step by w until they reach max + w.
ErrorHistogram build_error_histogram(std::span<const double> values, const HistogramConfig& cfg,
                                     int lead_hours = 0);
ErrorHistogram build_error_histogram(std::span<const ErrorSample> errors,
                                     const HistogramConfig& cfg);

}  // namespace windband
