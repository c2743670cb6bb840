#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "windband/timeseries.hpp"

namespace windband {

/// Half-open speed bins `[lo + k*width, lo + (k+1)*width)` covering `[lo, hi)`.
struct BinConfig {
  double lo = 0.0;
  double hi = 25.0;
  double width = 1.0;

  void validate() const;
  std::size_t bin_count() const;
  double center(std::size_t index) const { return lo + (static_cast<double>(index) + 0.5) * width; }
};

struct HourBin {
  std::size_t index = 0;
  std::vector<std::size_t> members;  // indices into the hourly record list
};

struct Binning {
  std::vector<HourBin> bins;  // non-empty bins, ascending index
  std::size_t out_of_range = 0;
};

struct BinFit {
  double bin_center = 0.0;
  double mu_star = 0.0;
  double sigma_star = 0.0;
  std::size_t n_hours = 0;
  std::size_t n_samples = 0;
};

struct GaussianMoments {
  double mean = 0.0;
  double stddev = 0.0;  // population (maximum-likelihood) estimate
};

/// Affine variability law sigma(mu) = intercept + slope * mu, clamped to the
/// domain and floored at `sigma_floor`.
struct VariabilityModel {
  double intercept = 0.0;
  double slope = 0.0;
  double domain_lo = 0.0;
  double domain_hi = 25.0;
  double sigma_floor = 1e-3;

  double sigma(double mu) const;
  void validate() const;
};

struct SigmaStar {
  double value = 0.0;
  bool clamped = false;
  bool floored = false;
};

inline constexpr std::size_t kDefaultMinHoursPerBin = 5;
inline constexpr double kDefaultSigmaFloor = 1e-3;

Binning bin_by_mean(std::span<const HourlyRecord> hourly, const BinConfig& cfg);

/// Two-pass mean and population standard deviation. Needs at least 2 values.
GaussianMoments gaussian_mle(std::span<const double> values);

/// Pools the intra-hour samples of every member hour and fits one Gaussian.
BinFit fit_bin_gaussian(std::span<const HourlyRecord> hourly, const HourBin& bin,
                        const BinConfig& cfg);

std::vector<BinFit> fit_bins(std::span<const HourlyRecord> hourly, const Binning& binning,
                             const BinConfig& cfg);

/// Least squares of sigma* on mu*, weighted by pooled sample count. Bins with
/// fewer than `min_hours_per_bin` hours are ignored.
VariabilityModel fit_linear_sigma(std::span<const BinFit> fits, const BinConfig& cfg,
                                  std::size_t min_hours_per_bin = kDefaultMinHoursPerBin,
                                  double sigma_floor = kDefaultSigmaFloor);

SigmaStar sigma_star(const VariabilityModel& model, double mu);

}  // namespace windband
