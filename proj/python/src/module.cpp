#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "becphase/analysis.hpp"
#include "becphase/cli/validate.hpp"
#include "becphase/fock_trajectory.hpp"
#include "becphase/model.hpp"
#include "becphase/montecarlo.hpp"
#include "becphase/phase_rep.hpp"
#include "becphase/pi_engine.hpp"

namespace py = pybind11;
using namespace becphase;

namespace {

Engine engine_arg(const std::string& name) { return parse_engine(name); }

py::dict ensemble_dict(const EnsembleSummary& e) {
    py::dict d;
    d["mean"] = e.per_step_mean;
    d["q25"] = e.per_step_lower_quartile;
    d["median"] = e.per_step_median;
    d["q75"] = e.per_step_upper_quartile;
    d["stderr"] = e.per_step_stderr;
    d["variance"] = e.variance_estimate_trace;
    d["mean_inverse_spread"] = e.mean_inverse_spread_trace;
    d["fitted_visibilities"] = e.fitted_visibilities;
    d["mean_fitted_visibility"] = e.mean_fitted_visibility;
    d["runs"] = e.runs;
    d["engine"] = std::string(to_string(e.engine));
    return d;
}

}  // namespace

PYBIND11_MODULE(_becphase, m) {
    m.doc() = "Relative-phase buildup between two condensates under atom counting";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<TrajectoryRangeError>(m, "TrajectoryRangeError", PyExc_RuntimeError);

    py::enum_<Distribution>(m, "Distribution")
        .value("Fock", Distribution::Fock)
        .value("Poisson", Distribution::Poisson)
        .value("Thermal", Distribution::Thermal)
        .value("Gaussian", Distribution::Gaussian);

    py::class_<CondensateSpec>(m, "CondensateSpec")
        .def_static("fock", &CondensateSpec::fock, py::arg("n"))
        .def_static("poisson", &CondensateSpec::poisson, py::arg("mean"))
        .def_static("thermal", &CondensateSpec::thermal, py::arg("mean"))
        .def_static("gaussian", &CondensateSpec::gaussian, py::arg("mean"), py::arg("variance"))
        .def_readonly("kind", &CondensateSpec::kind)
        .def_readonly("mean_n", &CondensateSpec::mean_n)
        .def_readonly("exact_n", &CondensateSpec::exact_n)
        .def_readonly("variance", &CondensateSpec::variance)
        .def("__repr__", [](const CondensateSpec& s) {
            return "CondensateSpec(" + std::string(to_string(s.kind)) + ", mean=" + std::to_string(s.mean_n) + ")";
        });

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("condensate_1", &ExperimentConfig::condensate_1)
        .def_readwrite("condensate_2", &ExperimentConfig::condensate_2)
        .def_readwrite("gamma_ratio", &ExperimentConfig::gamma_ratio)
        .def_readwrite("detections", &ExperimentConfig::detections)
        .def_readwrite("grid_points", &ExperimentConfig::grid_points)
        .def_readwrite("histogram_bins", &ExperimentConfig::histogram_bins)
        .def_readwrite("runs", &ExperimentConfig::runs)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def("validate", &ExperimentConfig::validate);

    m.def("falling_factorial_moment", &falling_factorial_moment, py::arg("spec"), py::arg("order"));
    m.def("visibility_one_detection", &visibility_one_detection, py::arg("first"), py::arg("second"),
          py::arg("gamma") = 1.0);
    m.def(
        "visibility_curve",
        [](const CondensateSpec& a, const CondensateSpec& b, const std::vector<double>& ratios, bool scale_second) {
            std::vector<double> out;
            for (const auto& p : visibility_curve(a, b, ratios, scale_second ? RatioAxis::ScaleSecondMean
                                                                            : RatioAxis::ScaleGamma))
                out.push_back(p.visibility);
            return out;
        },
        py::arg("first"), py::arg("second"), py::arg("ratios"), py::arg("scale_second_mean") = false);
    m.def("log_spaced_ratios", &log_spaced_ratios, py::arg("lo"), py::arg("hi"), py::arg("points"));
    m.def("lambda_visibility", &lambda_visibility, py::arg("n1"), py::arg("n2"), py::arg("gamma") = 1.0);

    m.def(
        "conditional_visibility",
        [](const CondensateSpec& a, const CondensateSpec& b, double gamma, const std::vector<double>& phases) {
            PiPolynomial poly;
            for (double p : phases) poly.update(p);
            const auto h = conditional_harmonic(poly, weights(a, b, gamma, poly.degree()));
            return py::make_tuple(h.visibility, h.phase);
        },
        py::arg("first"), py::arg("second"), py::arg("gamma"), py::arg("phases"),
        "(visibility, phase) of the density for the next detection");

    m.def(
        "filter_visibility",
        [](double lambda, const std::vector<double>& phases, int grid_points) {
            const PhaseAxis axis(grid_points);
            auto f = PhaseGrid::uniform(grid_points);
            for (double p : phases) f.apply_detection(axis, lambda, p);
            const auto h = predictive_harmonic(axis, f, lambda);
            const auto st = phase_stats(axis, f);
            py::dict d;
            d["visibility"] = h.visibility;
            d["phase"] = h.phase;
            d["variance"] = st.variance;
            d["circular_spread"] = st.circular_spread;
            return d;
        },
        py::arg("lambda_"), py::arg("phases"), py::arg("grid_points") = 1024);

    py::class_<NumberStateVector>(m, "NumberStateVector")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("n1"), py::arg("n2"))
        .def(
            "step",
            [](NumberStateVector& s, double phase, double gamma, double guard) {
                s.step(phase, gamma, TrajectoryOptions{guard});
            },
            py::arg("phase"), py::arg("gamma") = 1.0, py::arg("guard_fraction") = 0.1)
        .def_property_readonly("detections", &NumberStateVector::detections)
        .def_property_readonly("amplitudes", &NumberStateVector::amplitudes)
        .def("delta_phi", [](const NumberStateVector& s) { return delta_phi(s); })
        .def("relative_phase_expectation", [](const NumberStateVector& s) { return relative_phase_expectation(s); });

    m.def(
        "fit_fringe",
        [](const std::vector<double>& phases, int bins) {
            const auto f = fit_fringe(make_histogram(phases, bins));
            return py::make_tuple(f.beta, f.phase);
        },
        py::arg("phases"), py::arg("bins") = 25, "(beta, phase) of a least-squares fringe fit to binned phases");

    m.def(
        "run_single",
        [](const ExperimentConfig& c, const std::string& engine, std::uint64_t run_index) {
            RunSummary r;
            {
                py::gil_scoped_release nogil;
                r = run_single(c, engine_arg(engine), run_index);
            }
            py::dict d;
            d["phases"] = r.trace.phases;
            d["visibility"] = r.trace.per_step_visibility;
            d["variance"] = r.variance_trace;
            d["fitted_visibility"] = r.fitted_visibility;
            d["fitted_phase"] = r.fitted_phase;
            d["lambda"] = r.lambda;
            return d;
        },
        py::arg("config"), py::arg("engine") = "pi-exact", py::arg("run_index") = 0);

    m.def(
        "run_ensemble",
        [](const ExperimentConfig& c, const std::string& engine, int runs, std::uint64_t seed, int workers) {
            EnsembleSummary e;
            {
                py::gil_scoped_release nogil;
                e = run_ensemble(c, engine_arg(engine), runs, seed, EnsembleOptions{workers, {}});
            }
            return ensemble_dict(e);
        },
        py::arg("config"), py::arg("engine") = "pi-exact", py::arg("runs") = 1000, py::arg("seed") = 1,
        py::arg("workers") = 1);

    m.def(
        "validate",
        [](double perturbation) {
            cli::ValidationOptions opts;
            opts.lambda_perturbation = perturbation;
            const auto report = cli::run_validation(opts);
            py::list out;
            for (const auto& c : report.checks) {
                py::dict d;
                d["name"] = c.name;
                d["max_deviation"] = c.max_deviation;
                d["tolerance"] = c.tolerance;
                d["pass"] = c.pass;
                out.append(d);
            }
            return out;
        },
        py::arg("lambda_perturbation") = 0.0);
}
