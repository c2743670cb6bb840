#include "windband/power.hpp"

#include <algorithm>
#include <cmath>

#include "windband/error.hpp"

namespace windband {

namespace {

void check_speed(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu))
    throw Error(ErrorKind::InvalidArgument, "wind speed must be finite and nonnegative");
}

double segment_slope(const PowerCurve& c, std::size_t k) {
  return (c.ascent[k + 1].second - c.ascent[k].second) / (c.ascent[k + 1].first - c.ascent[k].first);
}

// Index k of the ascent segment [s_k, s_{k+1}) containing mu.
std::size_t segment_at(const PowerCurve& c, double mu) {
  auto it = std::upper_bound(c.ascent.begin(), c.ascent.end(), mu,
                             [](double v, const auto& bp) { return v < bp.first; });
  auto k = static_cast<std::size_t>(it - c.ascent.begin());
  return std::clamp<std::size_t>(k, 1, c.ascent.size() - 1) - 1;
}

}  // namespace

void PowerCurve::validate() const {
  auto fail = [](const char* msg) { throw Error(ErrorKind::InvalidArgument, msg); };
  if (!(0.0 < cut_in && cut_in < rated_speed && rated_speed < cut_out))
    fail("power curve: need 0 < cut_in < rated_speed < cut_out");
  if (!(rated_power > 0.0)) fail("power curve: rated_power must be positive");
  if (ascent.size() < 2) fail("power curve: ascent needs at least two breakpoints");
  if (ascent.front() != std::pair{cut_in, 0.0}) fail("power curve: ascent must start at (cut_in, 0)");
  if (ascent.back() != std::pair{rated_speed, rated_power})
    fail("power curve: ascent must end at (rated_speed, rated_power)");
  for (std::size_t i = 0; i + 1 < ascent.size(); ++i) {
    if (!(ascent[i].first < ascent[i + 1].first)) fail("power curve: ascent speeds must increase");
    if (!(ascent[i].second < ascent[i + 1].second)) fail("power curve: ascent powers must increase");
  }
}

std::vector<double> PowerCurve::breakpoints() const {
  std::vector<double> b;
  for (const auto& [s, p] : ascent) b.push_back(s);
  b.push_back(cut_out);
  return b;
}

PowerCurve PowerCurve::linear(double cut_in, double rated_speed, double cut_out, double rated_power) {
  PowerCurve c{cut_in, rated_speed, cut_out, rated_power, {{cut_in, 0.0}, {rated_speed, rated_power}}};
  c.validate();
  return c;
}

double power(const PowerCurve& curve, double mu) {
  check_speed(mu);
  if (mu < curve.cut_in) return 0.0;
  if (mu < curve.rated_speed) {
    const auto k = segment_at(curve, mu);
    const auto& [s0, p0] = curve.ascent[k];
    return p0 + segment_slope(curve, k) * (mu - s0);
  }
  if (mu < curve.cut_out) return curve.rated_power;
  return 0.0;
}

double slope(const PowerCurve& curve, double mu) {
  check_speed(mu);
  if (mu < curve.cut_in || mu >= curve.rated_speed) return 0.0;
  return segment_slope(curve, segment_at(curve, mu));
}

double left_slope(const PowerCurve& curve, double mu) {
  check_speed(mu);
  if (mu <= curve.cut_in || mu > curve.rated_speed) return 0.0;
  // segment (s_k, s_{k+1}] containing mu
  auto it = std::lower_bound(curve.ascent.begin(), curve.ascent.end(), mu,
                             [](const auto& bp, double v) { return bp.first < v; });
  auto k = static_cast<std::size_t>(it - curve.ascent.begin());
  return segment_slope(curve, k - 1);
}

PowerInterval power_interval(const PowerCurve& curve, const SpeedUncertaintySet& s) {
  if (!(s.mean_lo <= s.mean_hi))
    throw Error(ErrorKind::InvalidArgument, "speed set needs mean_lo <= mean_hi");
  PowerInterval out;
  out.straddles_cut_out = s.mean_hi > curve.cut_out;
  double lo = power(curve, s.mean_lo), hi = lo;
  auto take = [&](double p) {
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  };
  take(power(curve, s.mean_hi));
  for (double b : curve.breakpoints()) {
    if (b > s.mean_lo && b <= s.mean_hi) {
      take(power(curve, b));
      // power jumps down at cut-out; its left limit is rated power
      if (b == curve.cut_out) take(curve.rated_power);
    }
  }
  out.p_lo = lo;
  out.p_hi = hi;
  return out;
}

double sigma_power_point(const PowerCurve& curve, const VariabilityModel& vm, double mu) {
  return slope(curve, mu) * vm.sigma(mu);
}

std::pair<double, double> sigma_power_bounds(const PowerCurve& curve, const VariabilityModel& vm,
                                             const SpeedUncertaintySet& s,
                                             const SigmaGridConfig& grid) {
  if (!(s.mean_lo <= s.mean_hi))
    throw Error(ErrorKind::InvalidArgument, "speed set needs mean_lo <= mean_hi");
  if (!(grid.spacing > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid spacing must be positive");

  const double a = s.mean_lo, b = s.mean_hi;
  double lo = sigma_power_point(curve, vm, a), hi = lo;
  auto take = [&](double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  const auto n = static_cast<std::size_t>(std::ceil((b - a) / grid.spacing));
  for (std::size_t k = 1; k <= n; ++k)
    take(sigma_power_point(curve, vm, k == n ? b : a + (b - a) * static_cast<double>(k) / n));
  for (double bp : curve.breakpoints()) {
    if (bp >= a && bp < b) take(sigma_power_point(curve, vm, bp));
    if (bp > a && bp <= b) take(left_slope(curve, bp) * vm.sigma(bp));
  }
  return {lo, hi};
}

PowerUncertaintySet convert_to_power(const PowerCurve& curve, const VariabilityModel& vm,
                                     const SpeedUncertaintySet& s, const SigmaGridConfig& grid) {
  auto p = power_interval(curve, s);
  auto [slo, shi] = sigma_power_bounds(curve, vm, s, grid);
  return {p.p_lo, p.p_hi, slo, shi, p.straddles_cut_out};
}

}  // namespace windband
