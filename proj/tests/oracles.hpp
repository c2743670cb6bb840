#pragma once

// Brute-force reference computations for the tests. Nothing here calls into
// the library's numerical code; each routine recomputes its quantity from
// the defining formula.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

struct Line {
  double a, b;           // sigma = a + b*mu
  double lo = 0.0, hi = 25.0;
  double floor = 1e-3;

  double operator()(double mu) const {
    const double x = mu < lo ? lo : (mu > hi ? hi : mu);
    const double s = a + b * x;
    return s < floor ? floor : s;
  }
};

inline double gauss(double x, double m, double s) {
  return std::exp(-0.5 * (x - m) * (x - m) / (s * s)) / (s * std::sqrt(2.0 * std::numbers::pi));
}

/// (1/W) * integral of N[e; mu, sigma(mu)] over [mu_minus, mu_plus] by the
/// composite trapezoid rule on n intervals.
inline double trapezoid_mixture(double e, double mu_minus, double mu_plus, const Line& sigma,
                                long n = 1'000'000) {
  const double h = (mu_plus - mu_minus) / static_cast<double>(n);
  long double sum = 0.5L * (gauss(e, mu_minus, sigma(mu_minus)) + gauss(e, mu_plus, sigma(mu_plus)));
  for (long k = 1; k < n; ++k) {
    const double mu = mu_minus + h * static_cast<double>(k);
    sum += gauss(e, mu, sigma(mu));
  }
  return static_cast<double>(sum * h / (mu_plus - mu_minus));
}

/// Composite Simpson rule of f on [a, b] with n (even) intervals.
template <typename F>
double simpson(const F& f, double a, double b, long n) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  long double s = f(a) + f(b);
  for (long k = 1; k < n; ++k) s += (k % 2 ? 4.0L : 2.0L) * f(a + h * static_cast<double>(k));
  return static_cast<double>(s * h / 3.0L);
}

struct Moments {
  double mean, stddev;
};

inline Moments naive_moments(const std::vector<double>& v) {
  long double sum = 0;
  for (double x : v) sum += x;
  const long double mean = sum / v.size();
  long double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {static_cast<double>(mean), static_cast<double>(std::sqrt(ss / v.size()))};
}

struct Fit {
  double intercept, slope;
};

/// Textbook unweighted least squares.
inline Fit ols(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {(sy - slope * sx) / n, slope};
}

/// Four-region power curve evaluated by linear scan over its breakpoints.
struct Curve {
  double cut_in, rated, cut_out, rated_power;
  std::vector<std::pair<double, double>> pts;

  double power(double mu) const {
    if (mu < cut_in) return 0.0;
    if (mu >= cut_out) return 0.0;
    if (mu >= rated) return rated_power;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
      if (mu >= pts[k].first && mu < pts[k + 1].first)
        return pts[k].second + (pts[k + 1].second - pts[k].second) * (mu - pts[k].first) /
                                   (pts[k + 1].first - pts[k].first);
    return rated_power;
  }
  // derivative on the open segment to the right (right = true) or left of mu
  double slope(double mu, bool right) const {
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const bool inside = right ? (mu >= pts[k].first && mu < pts[k + 1].first)
                                : (mu > pts[k].first && mu <= pts[k + 1].first);
      if (inside)
        return (pts[k + 1].second - pts[k].second) / (pts[k + 1].first - pts[k].first);
    }
    return 0.0;
  }
  std::vector<double> kinks() const {
    std::vector<double> k;
    for (const auto& p : pts) k.push_back(p.first);
    k.push_back(cut_out);
    return k;
  }
};

/// min/max of power on [a, b]: n+1 uniform points, plus the value just left
/// of a downward jump (cut-out), which Region III attains.
inline std::pair<double, double> dense_power_interval(const Curve& c, double a, double b,
                                                      long n = 1'000'000) {
  double lo = INFINITY, hi = -INFINITY;
  for (long k = 0; k <= n; ++k) {
    const double mu = k == n ? b : a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
    const double p = c.power(mu);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  if (c.cut_out > a && c.cut_out <= b) hi = std::max(hi, c.rated_power);
  return {lo, hi};
}

/// inf/sup of slope(mu)*sigma(mu) on [a, b]: n+1 uniform points with the
/// right-hand slope, plus both one-sided limits at every kink in the interval.
inline std::pair<double, double> dense_sigma_power(const Curve& c, const Line& sigma, double a,
                                                   double b, long n = 1'000'000) {
  double lo = INFINITY, hi = -INFINITY;
  auto take = [&](double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  for (long k = 0; k <= n; ++k) {
    const double mu = k == n ? b : a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
    take(c.slope(mu, true) * sigma(mu));
  }
  for (double x : c.kinks()) {
    if (x >= a && x < b) take(c.slope(x, true) * sigma(x));
    if (x > a && x <= b) take(c.slope(x, false) * sigma(x));
  }
  return {lo, hi};
}

}  // namespace oracle
