#include "windband/synth.hpp"

#include <algorithm>

#include "windband/error.hpp"

namespace windband {

void SyntheticSpec::validate() const {
  if (hours < 1) throw Error(ErrorKind::InvalidArgument, "synthetic: hours must be at least 1");
  if (bounds.empty()) throw Error(ErrorKind::InvalidArgument, "synthetic: no leads configured");
  for (const auto& [lead, b] : bounds) {
    if (lead < 0) throw Error(ErrorKind::InvalidArgument, "synthetic: negative lead");
    if (!(b.mu_minus <= b.mu_plus))
      throw Error(ErrorKind::InvalidArgument, "synthetic: mu_minus must not exceed mu_plus");
  }
  if (!(0.0 <= mean_lo && mean_lo <= mean_hi))
    throw Error(ErrorKind::InvalidArgument, "synthetic: bad hourly mean range");
  if (cadence.count() <= 0 || 3600 % cadence.count() != 0)
    throw Error(ErrorKind::InvalidArgument, "synthetic: cadence must divide one hour");
  window.validate();
  truth().validate();
}

VariabilityModel SyntheticSpec::truth() const {
  return {intercept, slope, 0.0, 25.0, kDefaultSigmaFloor};
}

double sample_generalized_gaussian(double mu_minus, double mu_plus, const VariabilityModel& vm,
                                   Rng& rng) {
  std::uniform_real_distribution<double> uni(mu_minus, mu_plus);
  const double mu = mu_minus < mu_plus ? uni(rng) : mu_minus;
  std::normal_distribution<double> noise(mu, vm.sigma(mu));
  return noise(rng);
}

std::vector<double> sample_generalized_gaussian(std::size_t n, double mu_minus, double mu_plus,
                                                const VariabilityModel& vm, Rng& rng) {
  std::vector<double> out(n);
  for (auto& v : out) v = sample_generalized_gaussian(mu_minus, mu_plus, vm, rng);
  return out;
}

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const auto vm = spec.truth();
  Rng rng(spec.seed);
  std::uniform_real_distribution<double> hourly_mean(spec.mean_lo, spec.mean_hi);
  const auto per_hour = static_cast<std::size_t>(3600 / spec.cadence.count());

  SyntheticData data;
  data.measurements.cadence = spec.cadence;
  auto hour = std::chrono::floor<std::chrono::hours>(spec.start);
  std::size_t made = 0;
  std::vector<double> w(per_hour);
  while (made < spec.hours) {
    if (spec.window.contains(hour)) {
      const double mu = hourly_mean(rng);
      std::normal_distribution<double> noise(0.0, vm.sigma(mu));
      double sum = 0.0;
      for (std::size_t k = 0; k < per_hour; ++k) {
        w[k] = std::max(0.0, mu + noise(rng));
        data.measurements.samples.push_back({hour + k * spec.cadence, w[k]});
        sum += w[k];
      }
      // same arithmetic as aggregate_hourly
      const double realized = sum / static_cast<double>(per_hour);
      for (const auto& [lead, b] : spec.bounds) {
        const double u = sample_generalized_gaussian(b.mu_minus, b.mu_plus, vm, rng);
        data.forecasts.push_back({hour, lead, std::max(0.0, realized - u)});
      }
      ++made;
    }
    hour += std::chrono::hours{1};
  }
  return data;
}

}  // namespace windband
