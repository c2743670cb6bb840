#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "windband/timeseries.hpp"
#include "windband/variability.hpp"

namespace windband {

using Rng = std::mt19937_64;

struct LeadBounds {
  double mu_minus = 0.0;
  double mu_plus = 0.0;
};

struct SyntheticSpec {
  double intercept = 0.231;
  double slope = 0.197;
  std::map<int, LeadBounds> bounds{{1, {-1.0, 2.0}}};  // keyed by lead hours
  std::size_t hours = 500;
  std::uint64_t seed = 42;
  double mean_lo = 3.0;   // hourly means drawn uniformly from [mean_lo, mean_hi]
  double mean_hi = 20.0;
  Timestamp start = std::chrono::sys_days{std::chrono::year{2024} / 1 / 1};
  WindowFilter window = WindowFilter::all();
  std::chrono::seconds cadence{300};

  void validate() const;
  VariabilityModel truth() const;
};

struct SyntheticData {
  WindSpeedSeries measurements;
  std::vector<ForecastRecord> forecasts;
};

/// Draws from the generalized Gaussian: mu ~ U[mu_minus, mu_plus], then
/// e ~ N(mu, sigma*(mu)).
double sample_generalized_gaussian(double mu_minus, double mu_plus, const VariabilityModel& vm,
                                   Rng& rng);
std::vector<double> sample_generalized_gaussian(std::size_t n, double mu_minus, double mu_plus,
                                                const VariabilityModel& vm, Rng& rng);

/// Walks clock hours from `start`, keeping those inside the window, until
/// `hours` hours are generated. Each hour gets intra-hour samples
/// w = max(0, mu_t + N(0, a + b mu_t)). For every lead the forecast is the
/// realized hourly mean minus a generalized-Gaussian draw, so realized minus
/// forecast follows f^G with that lead's bounds.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace windband
