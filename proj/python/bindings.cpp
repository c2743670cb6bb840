#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "windband/pipeline.hpp"

namespace py = pybind11;
using namespace windband;

namespace {

template <typename T>
std::string repr_fields(const char* name, std::initializer_list<std::pair<const char*, T>> fields) {
  std::string s = std::string(name) + "(";
  bool first = true;
  for (const auto& [k, v] : fields) {
    s += (first ? "" : ", ") + std::string(k) + "=" + format_double(v);
    first = false;
  }
  return s + ")";
}

int run_command(int (*cmd)(const PipelineConfig&), const std::filesystem::path& config,
                std::optional<std::uint64_t> seed, std::optional<int> lead,
                std::optional<double> forecast_mean, std::optional<std::filesystem::path> out) {
  auto cfg = load_config(config);
  apply_overrides(cfg, {seed, lead, forecast_mean, out});
  py::gil_scoped_release release;
  return cmd(cfg);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "windband core bindings";
  m.attr("__version__") = kToolVersion;

  static py::exception<Error> error(m, "WindbandError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg = std::string(to_string(e.kind())) + ": " + e.what();
      PyErr_SetString(error.ptr(), msg.c_str());
    }
  });

  py::class_<VariabilityModel>(m, "VariabilityModel")
      .def(py::init([](double intercept, double slope, double lo, double hi, double floor) {
             VariabilityModel vm{intercept, slope, lo, hi, floor};
             vm.validate();
             return vm;
           }),
           py::arg("intercept"), py::arg("slope"), py::arg("domain_lo") = 0.0,
           py::arg("domain_hi") = 25.0, py::arg("sigma_floor") = kDefaultSigmaFloor)
      .def_readonly("intercept", &VariabilityModel::intercept)
      .def_readonly("slope", &VariabilityModel::slope)
      .def_readonly("domain_lo", &VariabilityModel::domain_lo)
      .def_readonly("domain_hi", &VariabilityModel::domain_hi)
      .def_readonly("sigma_floor", &VariabilityModel::sigma_floor)
      .def("sigma", &VariabilityModel::sigma, py::arg("mu"))
      .def("__repr__", [](const VariabilityModel& v) {
        return repr_fields<double>("VariabilityModel", {{"intercept", v.intercept}, {"slope", v.slope}});
      });

  py::class_<SigmaStar>(m, "SigmaStar")
      .def_readonly("value", &SigmaStar::value)
      .def_readonly("clamped", &SigmaStar::clamped)
      .def_readonly("floored", &SigmaStar::floored);
  m.def("sigma_star", &sigma_star, py::arg("model"), py::arg("mu"));

  m.def("gaussian_mle",
        [](const std::vector<double>& v) {
          auto g = gaussian_mle(v);
          return py::make_tuple(g.mean, g.stddev);
        },
        py::arg("values"), "Mean and population standard deviation.");

  m.def("fit_linear_sigma",
        [](const std::vector<double>& mu, const std::vector<double>& sigma,
           const std::vector<std::size_t>& n_samples, std::size_t min_hours, double floor) {
          if (mu.size() != sigma.size() || mu.size() != n_samples.size())
            throw Error(ErrorKind::InvalidArgument, "mu, sigma and n_samples must have equal length");
          std::vector<BinFit> fits;
          for (std::size_t i = 0; i < mu.size(); ++i)
            fits.push_back({mu[i], mu[i], sigma[i], min_hours, n_samples[i]});
          return fit_linear_sigma(fits, BinConfig{}, min_hours, floor);
        },
        py::arg("mu_star"), py::arg("sigma_star"), py::arg("n_samples"),
        py::arg("min_hours_per_bin") = kDefaultMinHoursPerBin,
        py::arg("sigma_floor") = kDefaultSigmaFloor,
        "Weighted least squares of sigma* on mu* over already-fitted bins.");

  py::class_<ErrorHistogram>(m, "ErrorHistogram")
      .def_readonly("lead_hours", &ErrorHistogram::lead_hours)
      .def_readonly("edges", &ErrorHistogram::edges)
      .def_readonly("density", &ErrorHistogram::density)
      .def_readonly("n_samples", &ErrorHistogram::n_samples)
      .def("mass", &ErrorHistogram::mass)
      .def("density_at", &ErrorHistogram::density_at, py::arg("e"));

  m.def("build_error_histogram",
        [](const std::vector<double>& values, std::optional<double> bin_width, std::size_t min_samples,
           int lead) {
          HistogramConfig cfg;
          cfg.bin_width = bin_width;
          cfg.min_samples = min_samples;
          return build_error_histogram(values, cfg, lead);
        },
        py::arg("errors"), py::arg("bin_width") = py::none(), py::arg("min_samples") = 30,
        py::arg("lead_hours") = 0);
  m.def("histogram_from_edges",
        [](const std::vector<double>& values, std::vector<double> edges, int lead) {
          return histogram_from_edges(values, std::move(edges), lead);
        },
        py::arg("errors"), py::arg("edges"), py::arg("lead_hours") = 0);

  m.def("eval_generalized_gaussian",
        [](const std::vector<double>& e, double mm, double mp, const VariabilityModel& vm) {
          GeneralizedGaussian g(mm, mp, vm);
          std::vector<double> out(e.size());
          for (std::size_t i = 0; i < e.size(); ++i) out[i] = g(e[i]);
          return out;
        },
        py::arg("e"), py::arg("mu_minus"), py::arg("mu_plus"), py::arg("model"),
        "Generalized-Gaussian density at each error value.");
  m.def("objective_l2",
        [](double mm, double mp, const ErrorHistogram& h, const VariabilityModel& vm) {
          return objective_l2(mm, mp, h, vm);
        },
        py::arg("mu_minus"), py::arg("mu_plus"), py::arg("histogram"), py::arg("model"));

  py::class_<MixtureFit>(m, "MixtureFit")
      .def(py::init([](double mm, double mp) {
             MixtureFit f;
             f.mu_minus = mm;
             f.mu_plus = mp;
             return f;
           }),
           py::arg("mu_minus"), py::arg("mu_plus"))
      .def_readonly("mu_minus", &MixtureFit::mu_minus)
      .def_readonly("mu_plus", &MixtureFit::mu_plus)
      .def_readonly("objective", &MixtureFit::objective)
      .def_readonly("grid_objective", &MixtureFit::grid_objective)
      .def_readonly("lead_hours", &MixtureFit::lead_hours)
      .def_readonly("quadrature_points", &MixtureFit::quadrature_points)
      .def("__repr__", [](const MixtureFit& f) {
        return repr_fields<double>("MixtureFit", {{"mu_minus", f.mu_minus},
                                                  {"mu_plus", f.mu_plus},
                                                  {"objective", f.objective}});
      });
  m.def("fit_mixture_bounds",
        [](const ErrorHistogram& h, const VariabilityModel& vm) {
          py::gil_scoped_release release;
          return fit_mixture_bounds(h, vm);
        },
        py::arg("histogram"), py::arg("model"));

  py::class_<SingleGaussianFit>(m, "SingleGaussianFit")
      .def_readonly("mean", &SingleGaussianFit::mean)
      .def_readonly("stddev", &SingleGaussianFit::stddev)
      .def_readonly("objective", &SingleGaussianFit::objective);
  m.def("fit_single_gaussian", [](const ErrorHistogram& h) { return fit_single_gaussian(h); },
        py::arg("histogram"));

  py::class_<SpeedUncertaintySet>(m, "SpeedUncertaintySet")
      .def(py::init([](double lo, double hi) {
             SpeedUncertaintySet s;
             s.mean_lo = lo;
             s.mean_hi = hi;
             s.forecast_mean = 0.5 * (lo + hi);
             return s;
           }),
           py::arg("mean_lo"), py::arg("mean_hi"))
      .def_readonly("forecast_mean", &SpeedUncertaintySet::forecast_mean)
      .def_readonly("mean_lo", &SpeedUncertaintySet::mean_lo)
      .def_readonly("mean_hi", &SpeedUncertaintySet::mean_hi)
      .def_readonly("sigma_lo", &SpeedUncertaintySet::sigma_lo)
      .def_readonly("sigma_hi", &SpeedUncertaintySet::sigma_hi);
  m.def("speed_uncertainty_set", &speed_uncertainty_set, py::arg("forecast_mean"), py::arg("fit"),
        py::arg("model"));

  py::class_<PowerCurve>(m, "PowerCurve")
      .def(py::init([](double cut_in, double rated_speed, double cut_out, double rated_power,
                       std::optional<std::vector<std::pair<double, double>>> ascent) {
             PowerCurve c{cut_in, rated_speed, cut_out, rated_power,
                          ascent ? *ascent
                                 : std::vector<std::pair<double, double>>{{cut_in, 0.0},
                                                                          {rated_speed, rated_power}}};
             c.validate();
             return c;
           }),
           py::arg("cut_in") = 3.5, py::arg("rated_speed") = 14.0, py::arg("cut_out") = 25.0,
           py::arg("rated_power") = 1.0, py::arg("ascent") = py::none())
      .def_readonly("cut_in", &PowerCurve::cut_in)
      .def_readonly("rated_speed", &PowerCurve::rated_speed)
      .def_readonly("cut_out", &PowerCurve::cut_out)
      .def_readonly("rated_power", &PowerCurve::rated_power)
      .def_readonly("ascent", &PowerCurve::ascent);
  m.def("power", &power, py::arg("curve"), py::arg("mu"));
  m.def("slope", &slope, py::arg("curve"), py::arg("mu"));

  py::class_<PowerUncertaintySet>(m, "PowerUncertaintySet")
      .def_readonly("p_lo", &PowerUncertaintySet::p_lo)
      .def_readonly("p_hi", &PowerUncertaintySet::p_hi)
      .def_readonly("sigma_p_lo", &PowerUncertaintySet::sigma_p_lo)
      .def_readonly("sigma_p_hi", &PowerUncertaintySet::sigma_p_hi)
      .def_readonly("straddles_cut_out", &PowerUncertaintySet::straddles_cut_out);
  m.def("convert_to_power",
        [](const PowerCurve& c, const VariabilityModel& vm, const SpeedUncertaintySet& s, double spacing) {
          return convert_to_power(c, vm, s, SigmaGridConfig{spacing});
        },
        py::arg("curve"), py::arg("model"), py::arg("speed_set"), py::arg("grid_spacing") = 1e-3);

  m.def("sample_generalized_gaussian",
        [](std::size_t n, double mm, double mp, const VariabilityModel& vm, std::uint64_t seed) {
          Rng rng(seed);
          return sample_generalized_gaussian(n, mm, mp, vm, rng);
        },
        py::arg("n"), py::arg("mu_minus"), py::arg("mu_plus"), py::arg("model"), py::arg("seed") = 42);

  const auto overrides = [](auto cmd) {
    return [cmd](const std::filesystem::path& config, std::optional<std::uint64_t> seed,
                 std::optional<int> lead, std::optional<double> forecast_mean,
                 std::optional<std::filesystem::path> out) {
      return run_command(cmd, config, seed, lead, forecast_mean, out);
    };
  };
  for (auto [name, cmd] : {std::pair{"synth", &cmd_synth},
                           {"fit_variability", &cmd_fit_variability},
                           {"fit_uncertainty", &cmd_fit_uncertainty},
                           {"convert", &cmd_convert},
                           {"pipeline", &cmd_pipeline}})
    m.def(name, overrides(cmd), py::arg("config"), py::kw_only(), py::arg("seed") = py::none(),
          py::arg("lead") = py::none(), py::arg("forecast_mean") = py::none(),
          py::arg("out") = py::none(), "Run the CLI command of the same name; returns its exit code.");
}
