#include "windband/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace windband {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("[") + stage + "] " + e.what());
  }
}

std::string read_file(const fs::path& p, const char* what) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, std::string("cannot open ") + what + " " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p, const char* what) {
  try {
    return json::parse(read_file(p, what));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string(what) + " " + p.string() + ": " + e.what());
  }
}

std::string num(double v) { return format_double(v); }

json tool_header(const PipelineConfig& cfg) {
  return {{"tool", "windband"}, {"version", kToolVersion}, {"config", config_to_json(cfg)}};
}

json bin_fit_json(const BinFit& f) {
  return {{"center", f.bin_center},
          {"mu_star", f.mu_star},
          {"sigma_star", f.sigma_star},
          {"n_hours", f.n_hours},
          {"n_samples", f.n_samples}};
}

json mixture_json(const MixtureFit& m) {
  return {{"mu_minus", m.mu_minus},
          {"mu_plus", m.mu_plus},
          {"objective", m.objective},
          {"grid_objective", m.grid_objective},
          {"lead_hours", m.lead_hours},
          {"quadrature_points", m.quadrature_points},
          {"evaluations", m.evaluations}};
}

json speed_json(const SpeedUncertaintySet& s) {
  return {{"forecast_mean", s.forecast_mean},
          {"mean_lo", s.mean_lo},
          {"mean_hi", s.mean_hi},
          {"sigma_lo", s.sigma_lo},
          {"sigma_hi", s.sigma_hi}};
}

json power_json(const PowerUncertaintySet& p) {
  return {{"p_lo", p.p_lo},
          {"p_hi", p.p_hi},
          {"sigma_p_lo", p.sigma_p_lo},
          {"sigma_p_hi", p.sigma_p_hi},
          {"straddles_cut_out", p.straddles_cut_out}};
}

json ingest_quality_json(const IngestStage& in, const VariabilityStage* var) {
  json q = {{"samples_read", in.samples_read},
            {"samples_selected", in.samples_selected},
            {"hours_aggregated", in.hourly.records.size()},
            {"dropped_hours", in.hourly.dropped_hours},
            {"dropped_samples", in.hourly.dropped_samples}};
  if (var) q["hours_out_of_range"] = var->hours_out_of_range;
  return q;
}

json lead_quality_json(const LeadStage& l) {
  return {{"n_errors", l.n_errors},
          {"skipped_hours", l.skipped_hours},
          {"unmatched_forecasts", l.unmatched_forecasts}};
}

json lead_fit_json(const LeadStage& l) {
  json j = {{"lead", l.lead}, {"status", l.ok ? "ok" : "skipped"}, {"quality", lead_quality_json(l)}};
  if (!l.ok) {
    j["reason"] = l.reason;
    return j;
  }
  j["mixture"] = mixture_json(l.mixture);
  j["single_gaussian"] = {{"mean", l.single.mean},
                          {"stddev", l.single.stddev},
                          {"objective", l.single.objective}};
  j["moments"] = {{"mean", l.moments.mean}, {"stddev", l.moments.stddev}};
  j["speed_set"] = speed_json(l.speed);
  return j;
}

struct CurveSamples {
  std::vector<double> e, empirical, mixture, single;
};

CurveSamples curve_samples(const LeadStage& l, const VariabilityModel& vm,
                           const QuadratureConfig& quad) {
  constexpr std::size_t kPoints = 401;
  CurveSamples c;
  GeneralizedGaussian g(l.mixture.mu_minus, l.mixture.mu_plus, vm, quad);
  const double a = l.histogram.edges.front(), b = l.histogram.edges.back();
  for (std::size_t k = 0; k < kPoints; ++k) {
    const double e = a + (b - a) * static_cast<double>(k) / (kPoints - 1);
    c.e.push_back(e);
    c.empirical.push_back(l.histogram.density_at(e));
    c.mixture.push_back(g(e));
    c.single.push_back(normal_pdf(e, l.single.mean, l.single.stddev));
  }
  return c;
}

std::string variability_bins_csv(const VariabilityStage& var) {
  std::ostringstream os;
  os << "bin_center,mu_star,sigma_star,n_hours,n_samples,model_sigma\n";
  for (const auto& f : var.fits)
    os << num(f.bin_center) << ',' << num(f.mu_star) << ',' << num(f.sigma_star) << ','
       << f.n_hours << ',' << f.n_samples << ',' << num(var.model.sigma(f.mu_star)) << '\n';
  return os.str();
}

// Intra-hour speed histograms per bin with the Gaussian fit alongside.
std::string variability_histograms_csv(const PipelineConfig& cfg, const IngestStage& ingest) {
  std::ostringstream os;
  os << "bin_center,speed,density,gaussian\n";
  const double w = cfg.plot_histogram_width;
  auto binning = bin_by_mean(ingest.hourly.records, cfg.bins);
  for (const auto& bin : binning.bins) {
    std::vector<double> pooled;
    for (auto i : bin.members) {
      const auto& s = ingest.hourly.records[i].intra_samples;
      pooled.insert(pooled.end(), s.begin(), s.end());
    }
    if (pooled.size() < 2) continue;
    auto [mn, mx] = std::minmax_element(pooled.begin(), pooled.end());
    const auto k0 = static_cast<long long>(std::floor(*mn / w));
    const auto k1 = static_cast<long long>(std::floor(*mx / w));
    std::vector<std::size_t> counts(static_cast<std::size_t>(k1 - k0 + 1), 0);
    for (double v : pooled) ++counts[static_cast<std::size_t>(static_cast<long long>(std::floor(v / w)) - k0)];
    auto m = gaussian_mle(pooled);
    for (std::size_t c = 0; c < counts.size(); ++c) {
      const double center = (static_cast<double>(k0 + static_cast<long long>(c)) + 0.5) * w;
      const double dens = static_cast<double>(counts[c]) / (static_cast<double>(pooled.size()) * w);
      const double g = m.stddev > 0.0 ? normal_pdf(center, m.mean, m.stddev) : 0.0;
      os << num(cfg.bins.center(bin.index)) << ',' << num(center) << ',' << num(dens) << ','
         << num(g) << '\n';
    }
  }
  return os.str();
}

std::string curves_csv(const CurveSamples& c) {
  std::ostringstream os;
  os << "e,empirical,mixture,single_gaussian\n";
  for (std::size_t k = 0; k < c.e.size(); ++k)
    os << num(c.e[k]) << ',' << num(c.empirical[k]) << ',' << num(c.mixture[k]) << ','
       << num(c.single[k]) << '\n';
  return os.str();
}

std::string bounds_csv(std::span<const LeadStage> leads) {
  std::ostringstream os;
  os << "lead,mu_minus,mu_plus,mean_lo,mean_hi,sigma_lo,sigma_hi\n";
  for (const auto& l : leads) {
    if (!l.ok) continue;
    os << l.lead << ',' << num(l.mixture.mu_minus) << ',' << num(l.mixture.mu_plus) << ','
       << num(l.speed.mean_lo) << ',' << num(l.speed.mean_hi) << ',' << num(l.speed.sigma_lo)
       << ',' << num(l.speed.sigma_hi) << '\n';
  }
  return os.str();
}

std::string power_sets_csv(std::span<const PowerStage> stages) {
  std::ostringstream os;
  os << "lead,mean_lo,mean_hi,p_lo,p_hi,sigma_p_lo,sigma_p_hi\n";
  for (const auto& s : stages) {
    if (!s.ok) continue;
    os << s.lead << ',' << num(s.speed.mean_lo) << ',' << num(s.speed.mean_hi) << ','
       << num(s.power.p_lo) << ',' << num(s.power.p_hi) << ',' << num(s.power.sigma_p_lo) << ','
       << num(s.power.sigma_p_hi) << '\n';
  }
  return os.str();
}

std::string power_curve_csv(const PowerCurve& curve) {
  std::ostringstream os;
  os << "speed,power,slope\n";
  const double top = curve.cut_out + 5.0;
  for (int k = 0; k <= static_cast<int>(top * 10.0); ++k) {
    const double mu = k / 10.0;
    os << num(mu) << ',' << num(power(curve, mu)) << ',' << num(slope(curve, mu)) << '\n';
  }
  return os.str();
}

int exit_for_leads(std::size_t ok, std::size_t total) {
  if (ok == total) return kExitOk;
  if (ok == 0) return kExitFit;
  return kExitPartial;
}

std::string uncertainty_file(int lead) { return "uncertainty_" + std::to_string(lead) + ".json"; }

void add_lead_outputs(OutputBundle& out, const PipelineConfig& cfg, const LeadStage& l,
                      const VariabilityModel& vm) {
  out.add_json(uncertainty_file(l.lead), uncertainty_report(cfg, l, vm));
  if (l.ok)
    out.add("uncertainty_" + std::to_string(l.lead) + "_curves.csv",
            curves_csv(curve_samples(l, vm, cfg.quadrature)));
}

VariabilityModel load_variability_model(const fs::path& p) {
  auto j = read_json(p, "variability report");
  if (!j.contains("model")) throw Error(ErrorKind::Parse, "variability report has no model");
  return variability_model_from_json(j.at("model"));
}

VariabilityModel variability_for(const PipelineConfig& cfg, const IngestStage& ingest) {
  if (cfg.variability_path)
    return in_stage("variability", [&] { return load_variability_model(*cfg.variability_path); });
  return run_variability(cfg, ingest).model;
}

}  // namespace

IngestStage ingest_measurements(const PipelineConfig& cfg) {
  return in_stage("ingest", [&] {
    std::ifstream in(cfg.measurement_path);
    if (!in) throw Error(ErrorKind::Io, "cannot open measurements " + cfg.measurement_path.string());
    IngestStage s;
    WindSpeedSeries raw;
    try {
      raw = parse_speed_series(in);
    } catch (const Error& e) {
      throw Error(e.kind(), "measurements " + cfg.measurement_path.string() + ": " + e.what());
    }
    s.samples_read = raw.size();
    auto selected = filter_window(raw, cfg.window);
    s.samples_selected = selected.size();
    s.hourly = aggregate_hourly(selected, cfg.min_samples_per_hour);
    return s;
  });
}

std::vector<ForecastRecord> ingest_forecasts(const PipelineConfig& cfg) {
  return in_stage("ingest", [&] {
    std::ifstream in(cfg.forecast_path);
    if (!in) throw Error(ErrorKind::Io, "cannot open forecasts " + cfg.forecast_path.string());
    try {
      return parse_forecast_series(in);
    } catch (const Error& e) {
      throw Error(e.kind(), "forecasts " + cfg.forecast_path.string() + ": " + e.what());
    }
  });
}

VariabilityStage run_variability(const PipelineConfig& cfg, const IngestStage& ingest) {
  return in_stage("variability", [&] {
    VariabilityStage v;
    auto binning = bin_by_mean(ingest.hourly.records, cfg.bins);
    v.hours_out_of_range = binning.out_of_range;
    v.fits = fit_bins(ingest.hourly.records, binning, cfg.bins);
    v.model = fit_linear_sigma(v.fits, cfg.bins, cfg.min_hours_per_bin, cfg.sigma_floor);
    return v;
  });
}

LeadStage run_lead(const PipelineConfig& cfg, std::span<const HourlyRecord> hourly,
                   std::span<const ForecastRecord> forecasts, const VariabilityModel& vm, int lead) {
  LeadStage l;
  l.lead = lead;
  try {
    auto aligned = align_errors(hourly, forecasts, lead);
    l.n_errors = aligned.samples.size();
    l.skipped_hours = aligned.skipped_hours;
    l.unmatched_forecasts = aligned.unmatched_forecasts;
    l.histogram = build_error_histogram(aligned.samples, cfg.histogram);
    l.histogram.lead_hours = lead;
    l.mixture = fit_mixture_bounds(l.histogram, vm, cfg.search, cfg.quadrature);
    l.single = fit_single_gaussian(l.histogram, cfg.search);
    std::vector<double> errs;
    for (const auto& e : aligned.samples) errs.push_back(e.error);
    l.moments = gaussian_mle(errs);
    l.speed = speed_uncertainty_set(cfg.forecast_mean, l.mixture, vm);
    l.ok = true;
  } catch (const Error& e) {
    if (exit_code_for(e.kind()) != kExitFit && e.kind() != ErrorKind::EmptyJoin)
      throw Error(e.kind(), "[uncertainty] lead " + std::to_string(lead) + ": " + e.what());
    l.ok = false;
    l.reason = std::string(to_string(e.kind())) + ": " + e.what();
  }
  return l;
}

PowerStage run_power(const PowerCurve& curve, const VariabilityModel& vm, const MixtureFit& fit,
                     double forecast_mean, const SigmaGridConfig& grid) {
  PowerStage s;
  s.lead = fit.lead_hours;
  s.speed = speed_uncertainty_set(forecast_mean, fit, vm);
  s.power = convert_to_power(curve, vm, s.speed, grid);
  s.ok = true;
  return s;
}

PowerCurve resolve_power_curve(const PipelineConfig& cfg) {
  return in_stage("power", [&] {
    if (!cfg.power_curve_path) return PowerCurve{};
    return load_power_curve(*cfg.power_curve_path);
  });
}

json variability_report(const PipelineConfig& cfg, const IngestStage& ingest,
                        const VariabilityStage& var) {
  json j = tool_header(cfg);
  json bins = json::array();
  for (const auto& f : var.fits) bins.push_back(bin_fit_json(f));
  j["bins"] = bins;
  j["model"] = variability_model_to_json(var.model);
  j["quality"] = ingest_quality_json(ingest, &var);
  return j;
}

json uncertainty_report(const PipelineConfig& cfg, const LeadStage& l, const VariabilityModel& vm) {
  json j = tool_header(cfg);
  j.update(lead_fit_json(l));
  j["variability_model"] = variability_model_to_json(vm);
  if (l.ok) {
    j["histogram"] = {{"edges", l.histogram.edges},
                      {"density", l.histogram.density},
                      {"n_samples", l.histogram.n_samples}};
    auto c = curve_samples(l, vm, cfg.quadrature);
    j["curves"] = {{"e", c.e}, {"empirical", c.empirical}, {"mixture", c.mixture}, {"single_gaussian", c.single}};
  }
  return j;
}

json power_report(const PipelineConfig& cfg, const PowerCurve& curve,
                  std::span<const PowerStage> stages) {
  json j = tool_header(cfg);
  j["forecast_mean"] = cfg.forecast_mean;
  j["curve"] = power_curve_to_json(curve);
  json leads = json::array();
  for (const auto& s : stages) {
    json e = {{"lead", s.lead}, {"status", s.ok ? "ok" : "skipped"}};
    if (s.ok) {
      e["speed_set"] = speed_json(s.speed);
      e["power_set"] = power_json(s.power);
    }
    leads.push_back(e);
  }
  j["leads"] = leads;
  return j;
}

void OutputBundle::add(std::string name, std::string content) {
  files_.emplace_back(std::move(name), std::move(content));
}

void OutputBundle::add_json(std::string name, const json& j) { add(std::move(name), j.dump(2) + "\n"); }

void OutputBundle::write(const fs::path& dir) const {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + dir.string());
  for (const auto& [name, content] : files_) {
    const auto path = dir / name;
    const auto tmp = dir / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
      out << content;
      if (!out) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot move " + tmp.string() + " into place");
  }
}

void apply_overrides(PipelineConfig& cfg, const CommandOverrides& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.lead) cfg.leads = {*o.lead};
  if (o.forecast_mean) cfg.forecast_mean = *o.forecast_mean;
  if (o.output_dir) cfg.output_dir = fs::absolute(*o.output_dir).lexically_normal();
  cfg.validate();
}

int cmd_synth(const PipelineConfig& cfg) {
  auto data = in_stage("synth", [&] { return generate_synthetic(cfg.synthetic_spec()); });
  std::ostringstream m, f;
  write_speed_series(m, data.measurements);
  write_forecast_series(f, data.forecasts);
  // the two inputs may live in different directories
  OutputBundle mb, fb;
  mb.add(cfg.measurement_path.filename().string(), m.str());
  fb.add(cfg.forecast_path.filename().string(), f.str());
  mb.write(cfg.measurement_path.parent_path().empty() ? fs::path(".") : cfg.measurement_path.parent_path());
  fb.write(cfg.forecast_path.parent_path().empty() ? fs::path(".") : cfg.forecast_path.parent_path());
  return kExitOk;
}

int cmd_fit_variability(const PipelineConfig& cfg) {
  auto ingest = ingest_measurements(cfg);
  auto var = run_variability(cfg, ingest);
  OutputBundle out;
  out.add_json("variability.json", variability_report(cfg, ingest, var));
  out.add("variability_bins.csv", variability_bins_csv(var));
  out.add("variability_histograms.csv", variability_histograms_csv(cfg, ingest));
  out.write(cfg.output_dir);
  return kExitOk;
}

int cmd_fit_uncertainty(const PipelineConfig& cfg) {
  auto ingest = ingest_measurements(cfg);
  auto forecasts = ingest_forecasts(cfg);
  auto vm = variability_for(cfg, ingest);
  std::vector<LeadStage> leads;
  for (int lead : cfg.leads) leads.push_back(run_lead(cfg, ingest.hourly.records, forecasts, vm, lead));

  OutputBundle out;
  std::size_t ok = 0;
  for (const auto& l : leads) {
    add_lead_outputs(out, cfg, l, vm);
    ok += l.ok;
  }
  out.add("uncertainty_bounds.csv", bounds_csv(leads));
  out.write(cfg.output_dir);
  return exit_for_leads(ok, leads.size());
}

int cmd_convert(const PipelineConfig& cfg) {
  const auto curve = resolve_power_curve(cfg);
  const auto vm = in_stage("power", [&] {
    return load_variability_model(cfg.variability_path ? *cfg.variability_path
                                                       : cfg.output_dir / "variability.json");
  });
  std::vector<PowerStage> stages;
  in_stage("power", [&] {
    for (int lead : cfg.leads) {
      auto j = read_json(cfg.output_dir / uncertainty_file(lead), "mixture fit");
      if (j.value("status", std::string()) != "ok") {
        stages.push_back({lead, false, {}, {}});
        continue;
      }
      MixtureFit fit;
      try {
        fit.mu_minus = j.at("mixture").at("mu_minus").get<double>();
        fit.mu_plus = j.at("mixture").at("mu_plus").get<double>();
        fit.objective = j.at("mixture").at("objective").get<double>();
      } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, uncertainty_file(lead) + ": " + e.what());
      }
      fit.lead_hours = lead;
      stages.push_back(run_power(curve, vm, fit, cfg.forecast_mean, cfg.sigma_grid));
    }
    return 0;
  });

  OutputBundle out;
  out.add_json("power_sets.json", power_report(cfg, curve, stages));
  out.add("power_sets.csv", power_sets_csv(stages));
  out.add("power_curve.csv", power_curve_csv(curve));
  out.write(cfg.output_dir);
  std::size_t ok = 0;
  for (const auto& s : stages) ok += s.ok;
  return exit_for_leads(ok, stages.size());
}

int cmd_pipeline(const PipelineConfig& cfg) {
  auto ingest = ingest_measurements(cfg);
  auto forecasts = ingest_forecasts(cfg);
  const auto curve = resolve_power_curve(cfg);
  std::optional<VariabilityStage> var;
  if (!cfg.variability_path) var = run_variability(cfg, ingest);
  const VariabilityModel vm =
      var ? var->model
          : in_stage("variability", [&] { return load_variability_model(*cfg.variability_path); });

  std::vector<LeadStage> leads;
  std::vector<PowerStage> power;
  for (int lead : cfg.leads) {
    leads.push_back(run_lead(cfg, ingest.hourly.records, forecasts, vm, lead));
    const auto& l = leads.back();
    if (l.ok)
      power.push_back(in_stage("power", [&] {
        return run_power(curve, vm, l.mixture, cfg.forecast_mean, cfg.sigma_grid);
      }));
    else
      power.push_back({lead, false, {}, {}});
  }

  std::size_t ok = 0;
  for (const auto& l : leads) ok += l.ok;
  const int code = exit_for_leads(ok, leads.size());

  json report = tool_header(cfg);
  report["status"] = code == kExitOk ? "ok" : (code == kExitPartial ? "partial" : "failed");
  report["quality"] = ingest_quality_json(ingest, var ? &*var : nullptr);
  report["variability"] = {{"model", variability_model_to_json(vm)}, {"bins", json::array()}};
  if (var)
    for (const auto& f : var->fits) report["variability"]["bins"].push_back(bin_fit_json(f));
  report["curve"] = power_curve_to_json(curve);
  json lj = json::array();
  for (std::size_t i = 0; i < leads.size(); ++i) {
    json e = lead_fit_json(leads[i]);
    if (power[i].ok) e["power_set"] = power_json(power[i].power);
    lj.push_back(e);
  }
  report["leads"] = lj;

  OutputBundle out;
  if (var) {
    out.add_json("variability.json", variability_report(cfg, ingest, *var));
    out.add("variability_bins.csv", variability_bins_csv(*var));
    out.add("variability_histograms.csv", variability_histograms_csv(cfg, ingest));
  }
  for (const auto& l : leads) add_lead_outputs(out, cfg, l, vm);
  out.add("uncertainty_bounds.csv", bounds_csv(leads));
  out.add_json("power_sets.json", power_report(cfg, curve, power));
  out.add("power_sets.csv", power_sets_csv(power));
  out.add("power_curve.csv", power_curve_csv(curve));
  out.add_json("report.json", report);
  out.write(cfg.output_dir);
  return code;
}

}  // namespace windband
