#include "windband/variability.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "windband/error.hpp"

namespace windband {

void BinConfig::validate() const {
  if (!(lo < hi)) throw Error(ErrorKind::InvalidArgument, "bin config: lo must be below hi");
  if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "bin config: width must be positive");
  double n = (hi - lo) / width;
  if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
    throw Error(ErrorKind::InvalidArgument, "bin config: (hi - lo) / width must be whole");
}

std::size_t BinConfig::bin_count() const {
  return static_cast<std::size_t>(std::llround((hi - lo) / width));
}

double VariabilityModel::sigma(double mu) const {
  return sigma_star(*this, mu).value;
}

void VariabilityModel::validate() const {
  if (!std::isfinite(intercept) || !std::isfinite(slope))
    throw Error(ErrorKind::InvalidArgument, "variability model: non-finite coefficients");
  if (!(domain_lo < domain_hi))
    throw Error(ErrorKind::InvalidArgument, "variability model: empty domain");
  if (!(sigma_floor > 0.0))
    throw Error(ErrorKind::InvalidArgument, "variability model: sigma_floor must be positive");
}

Binning bin_by_mean(std::span<const HourlyRecord> hourly, const BinConfig& cfg) {
  cfg.validate();
  const std::size_t n_bins = cfg.bin_count();
  std::map<std::size_t, std::vector<std::size_t>> members;
  Binning out;
  for (std::size_t i = 0; i < hourly.size(); ++i) {
    double mu = hourly[i].mean_speed;
    if (!(mu >= cfg.lo && mu < cfg.hi)) {
      ++out.out_of_range;
      continue;
    }
    auto k = static_cast<std::size_t>(std::floor((mu - cfg.lo) / cfg.width));
    members[std::min(k, n_bins - 1)].push_back(i);
  }
  for (auto& [k, m] : members) out.bins.push_back({k, std::move(m)});
  return out;
}

GaussianMoments gaussian_mle(std::span<const double> values) {
  if (values.size() < 2)
    throw Error(ErrorKind::InsufficientData, "Gaussian fit needs at least 2 samples");
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  double mean = sum / n;
  double ss = 0.0, comp = 0.0;
  for (double v : values) {
    double d = v - mean;
    ss += d * d;
    comp += d;
  }
  // corrected two-pass: removes the rounding error left in `mean`
  double var = (ss - comp * comp / n) / n;
  return {mean, std::sqrt(std::max(var, 0.0))};
}

BinFit fit_bin_gaussian(std::span<const HourlyRecord> hourly, const HourBin& bin,
                        const BinConfig& cfg) {
  std::vector<double> pooled;
  for (std::size_t i : bin.members) {
    const auto& s = hourly[i].intra_samples;
    pooled.insert(pooled.end(), s.begin(), s.end());
  }
  auto m = gaussian_mle(pooled);
  return {cfg.center(bin.index), m.mean, m.stddev, bin.members.size(), pooled.size()};
}

std::vector<BinFit> fit_bins(std::span<const HourlyRecord> hourly, const Binning& binning,
                             const BinConfig& cfg) {
  std::vector<BinFit> fits;
  fits.reserve(binning.bins.size());
  for (const auto& b : binning.bins) {
    std::size_t pooled = 0;
    for (std::size_t i : b.members) pooled += hourly[i].intra_samples.size();
    if (pooled < 2) continue;
    fits.push_back(fit_bin_gaussian(hourly, b, cfg));
  }
  return fits;
}

VariabilityModel fit_linear_sigma(std::span<const BinFit> fits, const BinConfig& cfg,
                                  std::size_t min_hours_per_bin, double sigma_floor) {
  double sw = 0.0, swx = 0.0, swy = 0.0;
  double x_min = INFINITY, x_max = -INFINITY;
  std::size_t usable = 0;
  for (const auto& f : fits) {
    if (f.n_hours < min_hours_per_bin) continue;
    auto w = static_cast<double>(f.n_samples);
    sw += w;
    swx += w * f.mu_star;
    swy += w * f.sigma_star;
    x_min = std::min(x_min, f.mu_star);
    x_max = std::max(x_max, f.mu_star);
    ++usable;
  }
  if (usable < 2)
    throw Error(ErrorKind::InsufficientBins,
                "variability regression needs at least 2 bins with enough hours");
  if (x_max - x_min <= 1e-12 * std::max(1.0, std::abs(x_max)))
    throw Error(ErrorKind::DegenerateRegression, "all bin means are identical");

  const double xbar = swx / sw, ybar = swy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& f : fits) {
    if (f.n_hours < min_hours_per_bin) continue;
    auto w = static_cast<double>(f.n_samples);
    sxx += w * (f.mu_star - xbar) * (f.mu_star - xbar);
    sxy += w * (f.mu_star - xbar) * (f.sigma_star - ybar);
  }
  VariabilityModel m;
  m.slope = sxy / sxx;
  m.intercept = ybar - m.slope * xbar;
  m.domain_lo = cfg.lo;
  m.domain_hi = cfg.hi;
  m.sigma_floor = sigma_floor;
  m.validate();
  return m;
}

SigmaStar sigma_star(const VariabilityModel& model, double mu) {
  SigmaStar out;
  double x = std::clamp(mu, model.domain_lo, model.domain_hi);
  out.clamped = x != mu;
  out.value = model.intercept + model.slope * x;
  if (!(out.value >= model.sigma_floor)) {
    out.value = model.sigma_floor;
    out.floored = true;
  }
  return out;
}

}  // namespace windband
