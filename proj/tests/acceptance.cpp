// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "oracles.hpp"
#include "windband/pipeline.hpp"

using namespace windband;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Tolerances and budgets.
constexpr double kA1SlopeRel = 0.10;
constexpr double kA1InterceptAbs = 0.1;
constexpr double kA1Seconds = 10.0;
constexpr double kA2BoundAbs = 0.25;
constexpr double kA2Seconds = 30.0;
constexpr double kA4MassAbs = 1e-6;
constexpr double kA5RelSup = 1e-3;
constexpr double kA6Abs = 1e-9;
constexpr double kA6Seconds = 20.0;

constexpr double kTrueIntercept = 0.231;
constexpr double kTrueSlope = 0.197;
constexpr std::uint64_t kSeed = 42;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

fs::path work_dir(const std::string& name) {
  fs::path d = fs::path(WINDBAND_TEST_TMP) / "acceptance" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

PipelineConfig synthetic_config(const fs::path& dir, std::size_t hours,
                                std::map<int, LeadBounds> bounds) {
  PipelineConfig cfg;
  cfg.measurement_path = dir / "meas.csv";
  cfg.forecast_path = dir / "fc.csv";
  cfg.output_dir = dir / "out";
  cfg.seed = kSeed;
  cfg.synthetic.intercept = kTrueIntercept;
  cfg.synthetic.slope = kTrueSlope;
  cfg.synthetic.hours = hours;
  cfg.leads.clear();
  for (const auto& [lead, b] : bounds) cfg.leads.push_back(lead);
  cfg.synthetic.bounds = std::move(bounds);
  cfg.validate();
  return cfg;
}

const VariabilityModel kTruth{kTrueIntercept, kTrueSlope};

ErrorHistogram a2_histogram() {
  Rng rng(kSeed);
  auto errors = sample_generalized_gaussian(5000, -1.0, 2.0, kTruth, rng);
  return build_error_histogram(errors, HistogramConfig{}, 1);
}

Outcome a1() {
  const auto t0 = std::chrono::steady_clock::now();
  auto cfg = synthetic_config(work_dir("a1"), 500, {{1, {-1.0, 2.0}}});
  cmd_synth(cfg);
  cmd_fit_variability(cfg);
  const double secs = seconds_since(t0);
  auto m = variability_model_from_json(json::parse(slurp(cfg.output_dir / "variability.json"))["model"]);
  const double slope_rel = std::abs(m.slope - kTrueSlope) / kTrueSlope;
  const double icpt_abs = std::abs(m.intercept - kTrueIntercept);
  return {slope_rel <= kA1SlopeRel && icpt_abs <= kA1InterceptAbs && secs < kA1Seconds,
          fmt("intercept %.4f (|err| %.4f <= %.2f), slope %.4f (rel err %.3f <= %.2f), %.2fs < %.0fs",
              m.intercept, icpt_abs, kA1InterceptAbs, m.slope, slope_rel, kA1SlopeRel, secs,
              kA1Seconds)};
}

Outcome a2() {
  const auto t0 = std::chrono::steady_clock::now();
  auto fit = fit_mixture_bounds(a2_histogram(), kTruth);
  const double secs = seconds_since(t0);
  const double em = std::abs(fit.mu_minus + 1.0), ep = std::abs(fit.mu_plus - 2.0);
  return {em <= kA2BoundAbs && ep <= kA2BoundAbs && secs < kA2Seconds,
          fmt("mu- %.4f (|err| %.4f), mu+ %.4f (|err| %.4f), tol %.2f, %.2fs < %.0fs", fit.mu_minus,
              em, fit.mu_plus, ep, kA2BoundAbs, secs, kA2Seconds)};
}

Outcome a3() {
  const auto hist = a2_histogram();
  auto mix = fit_mixture_bounds(hist, kTruth);
  auto single = fit_single_gaussian(hist);
  return {mix.objective < single.objective,
          fmt("mixture %.6e < single Gaussian %.6e", mix.objective, single.objective)};
}

Outcome a4() {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> a(0.05, 1.0), b(0.0, 0.3), lo(-5.0, 5.0), w(0.0, 6.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    VariabilityModel vm{a(rng), b(rng)};
    const double mm = lo(rng), mp = mm + w(rng);
    GeneralizedGaussian g(mm, mp, vm);
    const double L = mm - 10 * g.max_sigma(), R = mp + 10 * g.max_sigma();
    const double min_sigma = std::min(vm.sigma(mm), vm.sigma(mp));
    const long n = static_cast<long>((R - L) / (min_sigma / 20.0));
    worst = std::max(worst, std::abs(oracle::simpson(g, L, R, n) - 1.0));
  }
  return {worst <= kA4MassAbs, fmt("max |mass - 1| %.3e <= %.0e over 50 triples", worst, kA4MassAbs)};
}

Outcome a5() {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> a(0.05, 1.0), b(0.0, 0.3), mid(-5.0, 25.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    VariabilityModel vm = trial == 0 ? kTruth : VariabilityModel{a(rng), b(rng)};
    const double m = trial == 0 ? 0.5 : mid(rng);
    GeneralizedGaussian g(m - 0.5e-5, m + 0.5e-5, vm);
    const double s = vm.sigma(m);
    const double peak = normal_pdf(m, m, s);
    double sup = 0.0;
    for (int k = 0; k <= 2000; ++k) {
      const double e = m - 6 * s + 12 * s * k / 2000.0;
      sup = std::max(sup, std::abs(g(e) - normal_pdf(e, m, s)));
    }
    worst = std::max(worst, sup / peak);
  }
  return {worst < kA5RelSup, fmt("max sup|f^G - midpoint Gaussian| / peak %.3e < %.0e", worst, kA5RelSup)};
}

oracle::Curve as_oracle(const PowerCurve& c) {
  return {c.cut_in, c.rated_speed, c.cut_out, c.rated_power, c.ascent};
}

Outcome a6() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(0.0, 1.0), a(-0.3, 0.8), b(0.0, 0.3);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto c = gen::power_curve(rng);
    VariabilityModel vm{a(rng), b(rng)};
    const double lo = (c.cut_out + 3) * u(rng);
    const double hi = lo + 10 * u(rng);
    auto got = sigma_power_bounds(c, vm, gen::speed_set(lo, hi));
    auto want = oracle::dense_sigma_power(as_oracle(c), oracle::Line{vm.intercept, vm.slope}, lo, hi);
    worst = std::max({worst, std::abs(got.first - want.first), std::abs(got.second - want.second)});
  }
  const double secs = seconds_since(t0);
  return {worst <= kA6Abs && secs < kA6Seconds,
          fmt("max |diff| %.3e <= %.0e over 100 cases, %.2fs < %.0fs", worst, kA6Abs, secs, kA6Seconds)};
}

Outcome a7() {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int cases = 0, bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto c = trial == 0 ? PowerCurve{} : gen::power_curve(rng);
    const double lo = c.rated_speed + (c.cut_out - c.rated_speed) * u(rng);
    const double hi = lo + (c.cut_out - lo) * u(rng);
    if (!(hi < c.cut_out)) continue;
    ++cases;
    auto r = convert_to_power(c, kTruth, gen::speed_set(lo, hi));
    if (!(r.p_lo == c.rated_power && r.p_hi == c.rated_power && r.sigma_p_lo == 0.0 &&
          r.sigma_p_hi == 0.0))
      ++bad;
  }
  return {bad == 0 && cases > 0,
          fmt("%d of %d Region III intervals collapsed to [rated, rated] with (0, 0)", cases - bad, cases)};
}

Outcome a8() {
  std::map<int, LeadBounds> bounds;
  for (int lead = 1; lead <= 6; ++lead) bounds[lead] = {-0.3 * lead, 0.4 * lead};
  auto cfg = synthetic_config(work_dir("a8"), 2000, bounds);
  cmd_synth(cfg);
  const int code = cmd_pipeline(cfg);
  auto report = json::parse(slurp(cfg.output_dir / "report.json"));
  std::string widths;
  bool monotone = code == kExitOk;
  double prev = -1.0;
  for (const auto& l : report["leads"]) {
    const double w = l["mixture"]["mu_plus"].get<double>() - l["mixture"]["mu_minus"].get<double>();
    widths += fmt("%s%.3f", widths.empty() ? "" : " ", w);
    monotone = monotone && w >= prev;
    prev = w;
  }
  return {monotone, "widths by lead 1..6: " + widths};
}

Outcome a9() {
  auto cfg = synthetic_config(work_dir("a9"), 500, {{1, {-1.0, 2.0}}, {3, {-1.5, 2.5}}});
  cmd_synth(cfg);
  cmd_pipeline(cfg);
  const auto first = slurp(cfg.output_dir / "report.json");
  cmd_pipeline(cfg);
  const auto second = slurp(cfg.output_dir / "report.json");
  return {!first.empty() && first == second,
          fmt("report.json %zu bytes, runs %s", first.size(), first == second ? "identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"A1 variability recovery", a1}, {"A2 mixture-bound recovery", a2},
      {"A3 mixture beats single Gaussian", a3}, {"A4 density normalization", a4},
      {"A5 degenerate limit", a5}, {"A6 sigma_p oracle equivalence", a6},
      {"A7 Region III collapse", a7}, {"A8 monotone widening", a8}, {"A9 determinism", a9},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
