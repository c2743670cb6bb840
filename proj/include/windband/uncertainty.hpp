#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "windband/histogram.hpp"
#include "windband/nelder_mead.hpp"
#include "windband/variability.hpp"

namespace windband {

struct QuadratureConfig {
  std::size_t nodes = 64;      // Gauss-Legendre nodes per panel
  std::size_t panels = 1;      // minimum panels per smooth piece of sigma*(mu)
  double degeneracy = 1e-6;    // below this bracket width use the midpoint Gaussian
};

/// Uniform mixture of Gaussians N[e; mu, sigma*(mu)] over mu in
/// [mu_minus, mu_plus]. The mixing integral is discretized once at
/// construction; evaluation is a weighted sum of Gaussian kernels.
///
/// The bracket is split at every kink of sigma*(mu) (domain clamp and floor)
/// so each Gauss-Legendre panel sees a smooth integrand.
class GeneralizedGaussian {
 public:
  GeneralizedGaussian(double mu_minus, double mu_plus, const VariabilityModel& vm,
                      const QuadratureConfig& quad = {});

  double operator()(double e) const;

  double mu_minus() const { return mu_minus_; }
  double mu_plus() const { return mu_plus_; }
  /// Largest sigma*(mu) over the bracket.
  double max_sigma() const { return max_sigma_; }
  bool degenerate() const { return degenerate_; }
  std::size_t quadrature_points() const { return centers_.size(); }

 private:
  double mu_minus_, mu_plus_;
  double max_sigma_ = 0.0;
  bool degenerate_ = false;
  std::vector<double> centers_;
  std::vector<double> scale_;       // w_j / (W * sigma_j * sqrt(2 pi))
  std::vector<double> inv_two_var_; // 1 / (2 sigma_j^2)
};

double eval_generalized_gaussian(double e, double mu_minus, double mu_plus,
                                 const VariabilityModel& vm, const QuadratureConfig& quad = {});

/// Discretized L2 distance between a model density and the histogram,
/// summed over bin centers and over extra bins of the same width added
/// `margin` beyond each end of the histogram (where f^E is zero).
template <typename Density>
double discretized_l2(const ErrorHistogram& hist, const Density& model, double margin);

double objective_l2(double mu_minus, double mu_plus, const ErrorHistogram& hist,
                    const VariabilityModel& vm, const QuadratureConfig& quad = {});

struct SearchConfig {
  std::size_t grid_points = 41;   // per axis; only mu_minus <= mu_plus cells are scored
  double domain_sigmas = 2.0;     // grid spans [e_min - k*sbar, e_max + k*sbar]
  NelderMeadOptions refine{400, 1e-13, 1e-7};
};

struct MixtureFit {
  double mu_minus = 0.0;
  double mu_plus = 0.0;
  double objective = 0.0;
  double grid_objective = 0.0;  // best coarse-grid value before refinement
  int lead_hours = 0;
  std::size_t quadrature_points = 0;
  std::size_t evaluations = 0;
};

MixtureFit fit_mixture_bounds(const ErrorHistogram& hist, const VariabilityModel& vm,
                              const SearchConfig& search = {}, const QuadratureConfig& quad = {});

struct SingleGaussianFit {
  double mean = 0.0;
  double stddev = 0.0;
  double objective = 0.0;
  // moment estimates from the histogram, used as the starting point
  double moment_mean = 0.0;
  double moment_stddev = 0.0;
};

double single_gaussian_objective(double mean, double stddev, const ErrorHistogram& hist);

SingleGaussianFit fit_single_gaussian(const ErrorHistogram& hist, const SearchConfig& search = {});

struct SpeedUncertaintySet {
  double forecast_mean = 0.0;
  double mean_lo = 0.0;
  double mean_hi = 0.0;
  double sigma_lo = 0.0;
  double sigma_hi = 0.0;
};

SpeedUncertaintySet speed_uncertainty_set(double forecast_mean, const MixtureFit& fit,
                                          const VariabilityModel& vm);

// ---------------------------------------------------------------------------

inline double normal_pdf(double x, double mean, double sigma) {
  constexpr double inv_sqrt_2pi = 0.39894228040143267794;
  const double z = (x - mean) / sigma;
  return inv_sqrt_2pi / sigma * std::exp(-0.5 * z * z);
}

template <typename Density>
double discretized_l2(const ErrorHistogram& hist, const Density& model, double margin) {
  double sum = 0.0;
  for (std::size_t i = 0; i < hist.bin_count(); ++i) {
    const double d = model(hist.center(i)) - hist.density[i];
    sum += d * d * hist.width(i);
  }
  constexpr double kMaxMarginBins = 20000.0;
  const double w_lo = hist.width(0);
  const double w_hi = hist.width(hist.bin_count() - 1);
  const auto n_lo = static_cast<std::size_t>(std::min(std::ceil(margin / w_lo), kMaxMarginBins));
  const auto n_hi = static_cast<std::size_t>(std::min(std::ceil(margin / w_hi), kMaxMarginBins));
  for (std::size_t j = 0; j < n_lo; ++j) {
    const double g = model(hist.edges.front() - (static_cast<double>(j) + 0.5) * w_lo);
    sum += g * g * w_lo;
  }
  for (std::size_t j = 0; j < n_hi; ++j) {
    const double g = model(hist.edges.back() + (static_cast<double>(j) + 0.5) * w_hi);
    sum += g * g * w_hi;
  }
  return sum;
}

}  // namespace windband
