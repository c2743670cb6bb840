#pragma once

#include <utility>
#include <vector>

#include "windband/uncertainty.hpp"
#include "windband/variability.hpp"

namespace windband {

/// Single-turbine (or user-aggregated) power curve with four regions:
///   I   [0, cut_in)            zero output
///   II  [cut_in, rated_speed)  piecewise-linear ascent through `ascent`
///   III [rated_speed, cut_out) rated power
///   IV  [cut_out, inf)         shut down, zero output
struct PowerCurve {
  double cut_in = 3.5;
  double rated_speed = 14.0;
  double cut_out = 25.0;
  double rated_power = 1.0;  // p.u.
  std::vector<std::pair<double, double>> ascent{{3.5, 0.0}, {14.0, 1.0}};

  void validate() const;
  /// Speeds where power or its slope may jump: the ascent breakpoints and cut-out.
  std::vector<double> breakpoints() const;

  static PowerCurve linear(double cut_in, double rated_speed, double cut_out,
                           double rated_power = 1.0);
};

double power(const PowerCurve& curve, double mu);

/// Right-hand derivative of `power`.
double slope(const PowerCurve& curve, double mu);
/// Left-hand derivative of `power`; used for one-sided limits at breakpoints.
double left_slope(const PowerCurve& curve, double mu);

struct PowerInterval {
  double p_lo = 0.0;
  double p_hi = 0.0;
  bool straddles_cut_out = false;  // mean_hi > cut_out
};

/// Min and max of power over [mean_lo, mean_hi]. Coincides with the endpoint
/// map [p(mean_lo), p(mean_hi)] wherever the curve is nondecreasing.
PowerInterval power_interval(const PowerCurve& curve, const SpeedUncertaintySet& s);

/// slope(mu) * sigma*(mu)
double sigma_power_point(const PowerCurve& curve, const VariabilityModel& vm, double mu);

struct SigmaGridConfig {
  double spacing = 1e-3;  // m/s
};

/// Extremes of slope(mu) * sigma*(mu) over [mean_lo, mean_hi]. Scans a uniform
/// grid plus the endpoints, and at each breakpoint inside the interval takes
/// both one-sided values, so the result is the infimum/supremum on the closed
/// interval regardless of which derivative convention applies at a kink.
std::pair<double, double> sigma_power_bounds(const PowerCurve& curve, const VariabilityModel& vm,
                                             const SpeedUncertaintySet& s,
                                             const SigmaGridConfig& grid = {});

struct PowerUncertaintySet {
  double p_lo = 0.0;
  double p_hi = 0.0;
  double sigma_p_lo = 0.0;
  double sigma_p_hi = 0.0;
  bool straddles_cut_out = false;
};

PowerUncertaintySet convert_to_power(const PowerCurve& curve, const VariabilityModel& vm,
                                     const SpeedUncertaintySet& s,
                                     const SigmaGridConfig& grid = {});

}  // namespace windband
