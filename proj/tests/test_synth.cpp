#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "windband/error.hpp"
#include "windband/synth.hpp"
#include "windband/variability.hpp"

using namespace windband;

TEST_SUITE("synth") {

TEST_CASE("spec validation") {
  SyntheticSpec s;
  CHECK_NOTHROW(s.validate());
  auto bad = s;
  bad.hours = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = s;
  bad.bounds = {{1, {2.0, 1.0}}};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = s;
  bad.bounds.clear();
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = s;
  bad.mean_lo = 5;
  bad.mean_hi = 4;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = s;
  bad.cadence = std::chrono::seconds(420);
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("same seed gives identical data, different seeds differ") {
  SyntheticSpec s;
  s.hours = 50;
  s.bounds = {{1, {-1, 2}}, {3, {-2, 3}}};
  auto a = generate_synthetic(s);
  auto b = generate_synthetic(s);
  CHECK(a.measurements == b.measurements);
  CHECK(a.forecasts == b.forecasts);

  std::ostringstream fa, fb;
  write_speed_series(fa, a.measurements);
  write_speed_series(fb, b.measurements);
  CHECK(fa.str() == fb.str());

  s.seed = 43;
  auto c = generate_synthetic(s);
  CHECK_FALSE(c.measurements == a.measurements);
}

TEST_CASE("shape of the generated data") {
  SyntheticSpec s;
  s.hours = 100;
  s.bounds = {{1, {-1, 2}}, {2, {0, 0}}};
  s.window = WindowFilter{{1}, 6, 18};
  auto d = generate_synthetic(s);
  CHECK(d.measurements.size() == 100 * 12);
  CHECK(d.forecasts.size() == 200);
  for (const auto& w : d.measurements.samples) {
    CHECK(w.speed >= 0.0);
    CHECK(s.window.contains(w.timestamp));
  }
  auto agg = aggregate_hourly(d.measurements);
  CHECK(agg.records.size() == 100);
  CHECK(agg.dropped_hours == 0);
  for (const auto& r : agg.records) {
    CHECK(r.mean_speed >= s.mean_lo - 4 * s.truth().sigma(s.mean_hi));
  }
}

TEST_CASE("errors are the configured generalized-Gaussian draws") {
  SyntheticSpec s;
  s.hours = 4000;
  s.bounds = {{1, {-1, 2}}, {2, {0, 0}}};
  auto d = generate_synthetic(s);
  auto agg = aggregate_hourly(d.measurements);
  for (int lead : {1, 2}) {
    auto al = align_errors(agg.records, d.forecasts, lead);
    CHECK(al.samples.size() == 4000);
    std::vector<double> e;
    for (const auto& x : al.samples) e.push_back(x.error);
    auto m = oracle::naive_moments(e);
    if (lead == 1) {
      // uniform(-1, 2) center plus noise: mean 0.5
      CHECK(std::abs(m.mean - 0.5) < 0.05);
      CHECK(*std::min_element(e.begin(), e.end()) > -1.0 - 6 * s.truth().sigma(0));
    } else {
      // pure noise around zero with sigma*(0)
      CHECK(std::abs(m.mean) < 0.02);
      CHECK(std::abs(m.stddev - 0.231) < 0.01);
    }
  }
}

TEST_CASE("variability fit recovers the generating line") {
  SyntheticSpec s;
  s.hours = 3000;
  s.seed = 5;
  auto d = generate_synthetic(s);
  auto agg = aggregate_hourly(d.measurements);
  BinConfig cfg;
  auto fits = fit_bins(agg.records, bin_by_mean(agg.records, cfg), cfg);
  auto vm = fit_linear_sigma(fits, cfg);
  CHECK(std::abs(vm.intercept - 0.231) < 0.1);
  CHECK(std::abs(vm.slope - 0.197) / 0.197 < 0.1);
}

TEST_CASE("sampler moments") {
  VariabilityModel flat{0.5, 0.0};
  Rng rng(1);
  auto v = sample_generalized_gaussian(200000, -1.0, 3.0, flat, rng);
  auto m = oracle::naive_moments(v);
  // uniform(-1, 3) plus N(0, 0.5): mean 1, variance 16/12 + 0.25
  CHECK(std::abs(m.mean - 1.0) < 0.01);
  CHECK(std::abs(m.stddev - std::sqrt(16.0 / 12.0 + 0.25)) < 0.01);
}

}  // TEST_SUITE
