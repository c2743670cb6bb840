#include "windband/uncertainty.hpp"

#include <limits>

#include "windband/error.hpp"
#include "windband/quadrature.hpp"

namespace windband {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Points inside (a, b) where sigma*(mu) is not smooth.
std::vector<double> sigma_kinks(const VariabilityModel& vm, double a, double b) {
  std::vector<double> k = {vm.domain_lo, vm.domain_hi};
  if (vm.slope != 0.0) k.push_back((vm.sigma_floor - vm.intercept) / vm.slope);
  std::vector<double> out;
  for (double x : k)
    if (x > a && x < b) out.push_back(x);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

GeneralizedGaussian::GeneralizedGaussian(double mu_minus, double mu_plus,
                                         const VariabilityModel& vm, const QuadratureConfig& quad)
    : mu_minus_(mu_minus), mu_plus_(mu_plus) {
  if (!(mu_minus <= mu_plus))
    throw Error(ErrorKind::InvalidArgument, "generalized Gaussian needs mu_minus <= mu_plus");
  if (!std::isfinite(mu_minus) || !std::isfinite(mu_plus))
    throw Error(ErrorKind::InvalidArgument, "generalized Gaussian bounds must be finite");

  const double width = mu_plus - mu_minus;
  if (width < quad.degeneracy) {
    degenerate_ = true;
    const double mid = 0.5 * (mu_minus + mu_plus);
    const double s = vm.sigma(mid);
    max_sigma_ = s;
    centers_ = {mid};
    scale_ = {kInvSqrt2Pi / s};
    inv_two_var_ = {0.5 / (s * s)};
    return;
  }

  std::vector<double> breaks = {mu_minus};
  for (double k : sigma_kinks(vm, mu_minus, mu_plus)) breaks.push_back(k);
  breaks.push_back(mu_plus);

  // Each smooth piece gets enough panels that one panel spans at most
  // kPanelSigmas kernel widths; otherwise a narrow sigma (near the floor)
  // turns the quadrature into a comb of spikes.
  constexpr double kPanelSigmas = 16.0;
  constexpr double kMaxPanels = 4096.0;
  const GaussLegendreRule rule(quad.nodes);
  std::vector<double> weights;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    const double s_min = std::min(vm.sigma(a), vm.sigma(b));
    const double need = std::min(std::ceil((b - a) / (kPanelSigmas * s_min)), kMaxPanels);
    const auto panels = std::max(quad.panels, static_cast<std::size_t>(need));
    composite_gauss_legendre(rule, {a, b}, panels, centers_, weights);
  }

  // sigma*(mu) is monotone, so its maximum sits at an end of the bracket
  max_sigma_ = std::max(vm.sigma(mu_minus), vm.sigma(mu_plus));
  scale_.resize(centers_.size());
  inv_two_var_.resize(centers_.size());
  for (std::size_t j = 0; j < centers_.size(); ++j) {
    const double s = vm.sigma(centers_[j]);
    scale_[j] = weights[j] * kInvSqrt2Pi / (width * s);
    inv_two_var_[j] = 0.5 / (s * s);
  }
}

double GeneralizedGaussian::operator()(double e) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < centers_.size(); ++j) {
    const double d = e - centers_[j];
    sum += scale_[j] * std::exp(-d * d * inv_two_var_[j]);
  }
  return sum;
}

double eval_generalized_gaussian(double e, double mu_minus, double mu_plus,
                                 const VariabilityModel& vm, const QuadratureConfig& quad) {
  return GeneralizedGaussian(mu_minus, mu_plus, vm, quad)(e);
}

double objective_l2(double mu_minus, double mu_plus, const ErrorHistogram& hist,
                    const VariabilityModel& vm, const QuadratureConfig& quad) {
  GeneralizedGaussian g(mu_minus, mu_plus, vm, quad);
  return discretized_l2(hist, g, 4.0 * g.max_sigma());
}

MixtureFit fit_mixture_bounds(const ErrorHistogram& hist, const VariabilityModel& vm,
                              const SearchConfig& search, const QuadratureConfig& quad) {
  hist.validate();
  if (search.grid_points < 2)
    throw Error(ErrorKind::InvalidArgument, "search grid needs at least 2 points per axis");

  const double sbar = 0.5 * (vm.sigma(hist.sample_min) + vm.sigma(hist.sample_max));
  const double lo = hist.sample_min - search.domain_sigmas * sbar;
  const double hi = hist.sample_max + search.domain_sigmas * sbar;
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorKind::SearchDomain, "mixture search domain is empty");

  MixtureFit fit;
  fit.lead_hours = hist.lead_hours;
  const std::size_t n = search.grid_points;
  const double h = (hi - lo) / static_cast<double>(n - 1);
  auto grid = [&](std::size_t i) { return i + 1 == n ? hi : lo + static_cast<double>(i) * h; };

  // Cells are scored in a fixed order and ties keep the first, so the result
  // does not depend on evaluation order.
  double best = std::numeric_limits<double>::infinity();
  double best_lo = lo, best_hi = lo;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = objective_l2(grid(i), grid(j), hist, vm, quad);
      ++fit.evaluations;
      if (v < best) {
        best = v;
        best_lo = grid(i);
        best_hi = grid(j);
      }
    }
  }
  fit.grid_objective = best;

  // Refine in (mu_minus, log width) so mu_minus <= mu_plus always holds.
  constexpr double kMaxWidth = 1e6;
  auto f = [&](const std::vector<double>& x) {
    const double w = std::exp(x[1]);
    if (!std::isfinite(x[0]) || !(w <= kMaxWidth)) return std::numeric_limits<double>::infinity();
    return objective_l2(x[0], x[0] + w, hist, vm, quad);
  };
  const double w0 = std::max(best_hi - best_lo, 0.5 * h);
  auto nm = nelder_mead(f, {best_lo, std::log(w0)}, {0.5 * h, 0.5}, search.refine);
  fit.evaluations += nm.evaluations;

  if (nm.value < best) {
    fit.mu_minus = nm.x[0];
    fit.mu_plus = nm.x[0] + std::exp(nm.x[1]);
    fit.objective = nm.value;
  } else {
    fit.mu_minus = best_lo;
    fit.mu_plus = best_hi;
    fit.objective = best;
  }
  fit.quadrature_points = GeneralizedGaussian(fit.mu_minus, fit.mu_plus, vm, quad).quadrature_points();
  return fit;
}

double single_gaussian_objective(double mean, double stddev, const ErrorHistogram& hist) {
  if (!(stddev > 0.0)) throw Error(ErrorKind::InvalidArgument, "Gaussian stddev must be positive");
  return discretized_l2(hist, [&](double e) { return normal_pdf(e, mean, stddev); }, 4.0 * stddev);
}

SingleGaussianFit fit_single_gaussian(const ErrorHistogram& hist, const SearchConfig& search) {
  hist.validate();
  SingleGaussianFit out;
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < hist.bin_count(); ++i) {
    const double p = hist.density[i] * hist.width(i);
    m1 += p * hist.center(i);
  }
  for (std::size_t i = 0; i < hist.bin_count(); ++i) {
    const double p = hist.density[i] * hist.width(i);
    m2 += p * (hist.center(i) - m1) * (hist.center(i) - m1);
  }
  if (!(m2 > 0.0)) throw Error(ErrorKind::ZeroRange, "histogram has a single occupied bin");
  out.moment_mean = m1;
  out.moment_stddev = std::sqrt(m2);

  auto f = [&](const std::vector<double>& x) {
    const double s = std::exp(x[1]);
    if (!std::isfinite(x[0]) || !std::isfinite(s) || !(s > 0.0))
      return std::numeric_limits<double>::infinity();
    return single_gaussian_objective(x[0], s, hist);
  };
  auto nm = nelder_mead(f, {m1, std::log(out.moment_stddev)},
                        {0.25 * out.moment_stddev, 0.25}, search.refine);
  out.mean = nm.x[0];
  out.stddev = std::exp(nm.x[1]);
  out.objective = nm.value;
  return out;
}

SpeedUncertaintySet speed_uncertainty_set(double forecast_mean, const MixtureFit& fit,
                                          const VariabilityModel& vm) {
  if (!(forecast_mean >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "forecast mean must be nonnegative");
  SpeedUncertaintySet s;
  s.forecast_mean = forecast_mean;
  s.mean_lo = std::max(0.0, forecast_mean + fit.mu_minus);
  s.mean_hi = std::max(s.mean_lo, forecast_mean + fit.mu_plus);
  s.sigma_lo = vm.sigma(s.mean_lo);
  s.sigma_hi = vm.sigma(s.mean_hi);
  return s;
}

}  // namespace windband
