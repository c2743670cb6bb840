#include "windband/config.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

#include "windband/error.hpp"

namespace windband {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const char* where) {
  if (!j.is_object()) throw Error(ErrorKind::Config, std::string(where) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw Error(ErrorKind::Config, std::string(where) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->template get<T>();
}

void read_path(const json& j, const char* key, fs::path& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<std::string>();
}

void read_opt_path(const json& j, const char* key, std::optional<fs::path>& out) {
  if (auto it = j.find(key); it != j.end()) {
    if (it->is_null())
      out.reset();
    else
      out = fs::path(it->get<std::string>());
  }
}

json opt_path(const std::optional<fs::path>& p) {
  return p ? json(p->generic_string()) : json(nullptr);
}

fs::path resolve(const fs::path& base, const fs::path& p) {
  if (p.empty() || p.is_absolute()) return p;
  return (base / p).lexically_normal();
}

PipelineConfig parse_config(const json& j) {
  check_keys(j,
             {"measurement_path", "forecast_path", "power_curve_path", "variability_path",
              "output_dir", "window", "bins", "min_samples_per_hour", "min_hours_per_bin",
              "sigma_floor", "leads", "histogram", "quadrature", "search", "sigma_grid_spacing",
              "forecast_mean", "plot_histogram_width", "seed", "synthetic"},
             "config");
  PipelineConfig c;
  if (!j.contains("measurement_path") || !j.contains("forecast_path"))
    throw Error(ErrorKind::Config, "config: measurement_path and forecast_path are required");
  read_path(j, "measurement_path", c.measurement_path);
  read_path(j, "forecast_path", c.forecast_path);
  read_opt_path(j, "power_curve_path", c.power_curve_path);
  read_opt_path(j, "variability_path", c.variability_path);
  read_path(j, "output_dir", c.output_dir);

  if (auto it = j.find("window"); it != j.end()) {
    check_keys(*it, {"months", "hours"}, "config.window");
    if (auto m = it->find("months"); m != it->end())
      c.window.months = m->get<std::set<int>>();
    if (auto h = it->find("hours"); h != it->end()) {
      auto hours = h->get<std::vector<int>>();
      if (hours.size() != 2) throw Error(ErrorKind::Config, "config.window.hours: expected [begin, end]");
      c.window.hour_begin = hours[0];
      c.window.hour_end = hours[1];
    }
  }
  if (auto it = j.find("bins"); it != j.end()) {
    check_keys(*it, {"lo", "hi", "width"}, "config.bins");
    read(*it, "lo", c.bins.lo);
    read(*it, "hi", c.bins.hi);
    read(*it, "width", c.bins.width);
  }
  read(j, "min_samples_per_hour", c.min_samples_per_hour);
  read(j, "min_hours_per_bin", c.min_hours_per_bin);
  read(j, "sigma_floor", c.sigma_floor);
  read(j, "leads", c.leads);

  if (auto it = j.find("histogram"); it != j.end()) {
    check_keys(*it, {"rule", "width", "min_samples", "max_bins"}, "config.histogram");
    std::string rule = it->value("rule", std::string("freedman-diaconis"));
    if (rule == "fixed") {
      if (!it->contains("width"))
        throw Error(ErrorKind::Config, "config.histogram: fixed rule needs a width");
      c.histogram.bin_width = it->at("width").get<double>();
    } else if (rule == "freedman-diaconis") {
      if (it->contains("width"))
        throw Error(ErrorKind::Config, "config.histogram: width only applies to the fixed rule");
    } else {
      throw Error(ErrorKind::Config, "config.histogram: unknown rule '" + rule + "'");
    }
    read(*it, "min_samples", c.histogram.min_samples);
    read(*it, "max_bins", c.histogram.max_bins);
  }
  if (auto it = j.find("quadrature"); it != j.end()) {
    check_keys(*it, {"nodes", "panels", "degeneracy"}, "config.quadrature");
    read(*it, "nodes", c.quadrature.nodes);
    read(*it, "panels", c.quadrature.panels);
    read(*it, "degeneracy", c.quadrature.degeneracy);
  }
  if (auto it = j.find("search"); it != j.end()) {
    check_keys(*it, {"grid_points", "domain_sigmas", "max_iterations", "f_tolerance", "x_tolerance"},
               "config.search");
    read(*it, "grid_points", c.search.grid_points);
    read(*it, "domain_sigmas", c.search.domain_sigmas);
    read(*it, "max_iterations", c.search.refine.max_iterations);
    read(*it, "f_tolerance", c.search.refine.f_tolerance);
    read(*it, "x_tolerance", c.search.refine.x_tolerance);
  }
  read(j, "sigma_grid_spacing", c.sigma_grid.spacing);
  read(j, "forecast_mean", c.forecast_mean);
  read(j, "plot_histogram_width", c.plot_histogram_width);
  read(j, "seed", c.seed);

  if (auto it = j.find("synthetic"); it != j.end()) {
    check_keys(*it, {"intercept", "slope", "hours", "mean_range", "start", "bounds"},
               "config.synthetic");
    auto& s = c.synthetic;
    read(*it, "intercept", s.intercept);
    read(*it, "slope", s.slope);
    read(*it, "hours", s.hours);
    if (auto r = it->find("mean_range"); r != it->end()) {
      auto v = r->get<std::vector<double>>();
      if (v.size() != 2) throw Error(ErrorKind::Config, "config.synthetic.mean_range: expected [lo, hi]");
      s.mean_lo = v[0];
      s.mean_hi = v[1];
    }
    if (auto st = it->find("start"); st != it->end()) s.start = parse_timestamp(st->get<std::string>());
    if (auto b = it->find("bounds"); b != it->end()) {
      s.bounds.clear();
      for (const auto& e : *b) {
        check_keys(e, {"lead", "mu_minus", "mu_plus"}, "config.synthetic.bounds[]");
        int lead = e.at("lead").get<int>();
        if (!s.bounds.emplace(lead, LeadBounds{e.at("mu_minus").get<double>(),
                                               e.at("mu_plus").get<double>()})
                 .second)
          throw Error(ErrorKind::Config, "config.synthetic.bounds: duplicate lead");
      }
    }
  }
  return c;
}

}  // namespace

void PipelineConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::Config, "config: " + m); };
  if (measurement_path.empty() || forecast_path.empty()) fail("input paths must be set");
  if (leads.empty()) fail("leads must be nonempty");
  std::set<int> seen;
  for (int l : leads) {
    if (l <= 0) fail("leads must be positive");
    if (!seen.insert(l).second) fail("duplicate lead " + std::to_string(l));
  }
  if (min_samples_per_hour < 1) fail("min_samples_per_hour must be at least 1");
  if (!(sigma_floor > 0.0)) fail("sigma_floor must be positive");
  if (!(forecast_mean >= 0.0)) fail("forecast_mean must be nonnegative");
  if (!(plot_histogram_width > 0.0)) fail("plot_histogram_width must be positive");
  if (quadrature.nodes < 1 || quadrature.panels < 1) fail("quadrature needs nodes and panels >= 1");
  if (!(quadrature.degeneracy >= 0.0)) fail("quadrature degeneracy must be nonnegative");
  if (search.grid_points < 2) fail("search grid_points must be at least 2");
  if (!(sigma_grid.spacing > 0.0)) fail("sigma_grid_spacing must be positive");
  if (histogram.bin_width && !(*histogram.bin_width > 0.0)) fail("histogram width must be positive");
  try {
    window.validate();
    bins.validate();
  } catch (const Error& e) {
    fail(e.what());
  }
}

void PipelineConfig::resolve_paths(const fs::path& base) {
  measurement_path = resolve(base, measurement_path);
  forecast_path = resolve(base, forecast_path);
  if (power_curve_path) power_curve_path = resolve(base, *power_curve_path);
  if (variability_path) variability_path = resolve(base, *variability_path);
  output_dir = resolve(base, output_dir);
}

SyntheticSpec PipelineConfig::synthetic_spec() const {
  SyntheticSpec s = synthetic;
  s.seed = seed;
  s.window = window;
  return s;
}

PipelineConfig config_from_json(const json& j) {
  PipelineConfig c;
  try {
    c = parse_config(j);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    throw Error(ErrorKind::Config, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

json config_to_json(const PipelineConfig& c) {
  json j;
  j["measurement_path"] = c.measurement_path.generic_string();
  j["forecast_path"] = c.forecast_path.generic_string();
  j["power_curve_path"] = opt_path(c.power_curve_path);
  j["variability_path"] = opt_path(c.variability_path);
  j["output_dir"] = c.output_dir.generic_string();
  j["window"] = {{"months", c.window.months}, {"hours", {c.window.hour_begin, c.window.hour_end}}};
  j["bins"] = {{"lo", c.bins.lo}, {"hi", c.bins.hi}, {"width", c.bins.width}};
  j["min_samples_per_hour"] = c.min_samples_per_hour;
  j["min_hours_per_bin"] = c.min_hours_per_bin;
  j["sigma_floor"] = c.sigma_floor;
  j["leads"] = c.leads;
  json h = {{"min_samples", c.histogram.min_samples}, {"max_bins", c.histogram.max_bins}};
  if (c.histogram.bin_width) {
    h["rule"] = "fixed";
    h["width"] = *c.histogram.bin_width;
  } else {
    h["rule"] = "freedman-diaconis";
  }
  j["histogram"] = h;
  j["quadrature"] = {{"nodes", c.quadrature.nodes},
                     {"panels", c.quadrature.panels},
                     {"degeneracy", c.quadrature.degeneracy}};
  j["search"] = {{"grid_points", c.search.grid_points},
                 {"domain_sigmas", c.search.domain_sigmas},
                 {"max_iterations", c.search.refine.max_iterations},
                 {"f_tolerance", c.search.refine.f_tolerance},
                 {"x_tolerance", c.search.refine.x_tolerance}};
  j["sigma_grid_spacing"] = c.sigma_grid.spacing;
  j["forecast_mean"] = c.forecast_mean;
  j["plot_histogram_width"] = c.plot_histogram_width;
  j["seed"] = c.seed;
  json bounds = json::array();
  for (const auto& [lead, b] : c.synthetic.bounds)
    bounds.push_back({{"lead", lead}, {"mu_minus", b.mu_minus}, {"mu_plus", b.mu_plus}});
  j["synthetic"] = {{"intercept", c.synthetic.intercept},
                    {"slope", c.synthetic.slope},
                    {"hours", c.synthetic.hours},
                    {"mean_range", {c.synthetic.mean_lo, c.synthetic.mean_hi}},
                    {"start", format_timestamp(c.synthetic.start)},
                    {"bounds", bounds}};
  return j;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, "config " + path.string() + ": " + e.what());
  }
  auto c = config_from_json(j);
  c.resolve_paths(fs::absolute(path).parent_path());
  return c;
}

PowerCurve power_curve_from_json(const json& j) {
  PowerCurve c;
  try {
    check_keys(j, {"cut_in", "rated_speed", "cut_out", "rated_power", "ascent"}, "power curve");
    c.cut_in = j.at("cut_in").get<double>();
    c.rated_speed = j.at("rated_speed").get<double>();
    c.cut_out = j.at("cut_out").get<double>();
    c.rated_power = j.value("rated_power", 1.0);
    if (j.contains("ascent")) {
      c.ascent.clear();
      for (const auto& bp : j.at("ascent")) {
        auto v = bp.get<std::vector<double>>();
        if (v.size() != 2) throw Error(ErrorKind::Config, "power curve: ascent entries are [speed, power]");
        c.ascent.emplace_back(v[0], v[1]);
      }
    } else {
      c.ascent = {{c.cut_in, 0.0}, {c.rated_speed, c.rated_power}};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("power curve: ") + e.what());
  }
  c.validate();
  return c;
}

json power_curve_to_json(const PowerCurve& c) {
  json ascent = json::array();
  for (const auto& [s, p] : c.ascent) ascent.push_back({s, p});
  return {{"cut_in", c.cut_in},
          {"rated_speed", c.rated_speed},
          {"cut_out", c.cut_out},
          {"rated_power", c.rated_power},
          {"ascent", ascent}};
}

PowerCurve load_power_curve(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open power curve " + path.string());
  try {
    return power_curve_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, "power curve " + path.string() + ": " + e.what());
  }
}

VariabilityModel variability_model_from_json(const json& j) {
  VariabilityModel m;
  try {
    m.intercept = j.at("intercept").get<double>();
    m.slope = j.at("slope").get<double>();
    auto d = j.at("domain").get<std::vector<double>>();
    if (d.size() != 2) throw Error(ErrorKind::Config, "variability model: domain is [lo, hi]");
    m.domain_lo = d[0];
    m.domain_hi = d[1];
    m.sigma_floor = j.at("sigma_floor").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("variability model: ") + e.what());
  }
  m.validate();
  return m;
}

json variability_model_to_json(const VariabilityModel& m) {
  return {{"intercept", m.intercept},
          {"slope", m.slope},
          {"domain", {m.domain_lo, m.domain_hi}},
          {"sigma_floor", m.sigma_floor}};
}

}  // namespace windband
