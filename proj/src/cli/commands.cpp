#include "becphase/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "becphase/analysis.hpp"
#include "becphase/cli/config.hpp"
#include "becphase/cli/output.hpp"
#include "becphase/cli/validate.hpp"
#include "becphase/montecarlo.hpp"
#include "becphase/phase_rep.hpp"

namespace becphase::cli {

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> assignments;
    std::string output = "-";
    std::string summary;
    int workers = 1;
    bool timing = false;
    // shorthand overrides, applied after --set
    std::string kind;
    std::string engine;
    std::string runs;
    std::string seed;
    std::string detections;
    std::string gamma;
};

void add_common(CLI::App& sub, CommonArgs& a, bool simulation) {
    sub.add_option("-c,--config", a.config_path, "key = value configuration file");
    sub.add_option("--set", a.assignments, "override a configuration key (key=value)");
    sub.add_option("-o,--output", a.output, "CSV output path ('-' for stdout)");
    sub.add_option("--summary", a.summary, "JSON summary path");
    if (!simulation) return;
    sub.add_option("--kind", a.kind, "distribution of both condensates");
    sub.add_option("--engine", a.engine, "pi-exact | phase-filter | fock-trajectory");
    sub.add_option("--runs", a.runs, "runs per ensemble");
    sub.add_option("--seed", a.seed, "ensemble seed");
    sub.add_option("--detections", a.detections, "detections per run");
    sub.add_option("--gamma", a.gamma, "detection-rate ratio");
    sub.add_option("--workers", a.workers, "worker threads (does not change results)")->check(CLI::PositiveNumber);
    sub.add_flag("--timing", a.timing, "record wall time in the JSON summary");
}

Settings resolve(const CommonArgs& a) {
    Settings s;
    if (!a.config_path.empty()) s.load_file(a.config_path);
    for (const auto& kv : a.assignments) s.set_assignment(kv);
    if (!a.kind.empty()) {
        s.set("condensate1.kind", a.kind);
        s.set("condensate2.kind", a.kind);
    }
    if (!a.engine.empty()) s.set("engine", a.engine);
    if (!a.runs.empty()) s.set("runs", a.runs);
    if (!a.seed.empty()) s.set("seed", a.seed);
    if (!a.detections.empty()) s.set("detections", a.detections);
    if (!a.gamma.empty()) s.set("gamma", a.gamma);
    return s;
}

void emit(const CommonArgs& a, const std::string& csv, const nlohmann::ordered_json& summary, std::ostream& out) {
    write_output(a.output, csv, out);
    if (!a.summary.empty()) write_output(a.summary, summary.dump(2) + "\n", out);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool both_thermal(const ExperimentConfig& c) {
    return c.condensate_1.kind == Distribution::Thermal && c.condensate_2.kind == Distribution::Thermal;
}

int cmd_visibility_curve(const CommonArgs& a, std::ostream& out) {
    const Settings s = resolve(a);
    const auto ratios = log_spaced_ratios(s.get_double("curve.ratio_min"), s.get_double("curve.ratio_max"),
                                          static_cast<int>(s.get_int("curve.points")));
    const std::string axis_name = s.get("curve.axis");
    RatioAxis axis;
    if (axis_name == "gamma") {
        axis = RatioAxis::ScaleGamma;
    } else if (axis_name == "second-mean") {
        axis = RatioAxis::ScaleSecondMean;
    } else {
        throw ConfigError("curve.axis must be 'gamma' or 'second-mean'");
    }
    const long long fock_n = s.get_int("curve.fock_n");
    if (fock_n < 1) throw ConfigError("curve.fock_n must be positive");
    const double mean = s.get_double("condensate1.mean");
    const auto fock = CondensateSpec::fock(static_cast<std::uint64_t>(fock_n));
    const auto fock_curve = visibility_curve(fock, fock, ratios, axis);
    const auto poisson_curve = visibility_curve(CondensateSpec::poisson(mean), CondensateSpec::poisson(mean), ratios, axis);
    const auto thermal_curve = visibility_curve(CondensateSpec::thermal(mean), CondensateSpec::thermal(mean), ratios, axis);

    CsvTable table("visibility-curve", s, {"ratio", "v_fock", "v_poisson", "v_thermal"});
    for (std::size_t i = 0; i < ratios.size(); ++i)
        table.add_row({ratios[i], fock_curve[i].visibility, poisson_curve[i].visibility, thermal_curve[i].visibility});

    auto summary = summary_skeleton("visibility-curve", s);
    auto peak = [](const std::vector<VisibilityPoint>& c) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < c.size(); ++i)
            if (c[i].visibility > c[best].visibility) best = i;
        return nlohmann::ordered_json{{"ratio", c[best].ratio}, {"visibility", c[best].visibility}};
    };
    summary["peaks"] = {{"fock", peak(fock_curve)}, {"poisson", peak(poisson_curve)}, {"thermal", peak(thermal_curve)}};
    emit(a, table.str(), summary, out);
    return kExitOk;
}

int cmd_run(const CommonArgs& a, std::uint64_t run_index, std::ostream& out) {
    const Settings s = resolve(a);
    const auto cfg = s.experiment();
    const auto r = run_single(cfg, s.engine(), run_index, s.run_options());

    CsvTable table("run", s, {"m", "phase", "visibility", "variance"});
    for (std::size_t i = 0; i < r.trace.phases.size(); ++i)
        table.add_row({static_cast<double>(i + 1), r.trace.phases[i], r.trace.per_step_visibility[i], r.variance_trace[i]});

    const auto hist = make_histogram(r.trace.phases, cfg.histogram_bins);
    auto summary = summary_skeleton("run", s);
    summary["run_index"] = run_index;
    summary["final_visibility"] = r.trace.per_step_visibility.back();
    summary["fitted_visibility"] = r.fitted_visibility;
    summary["fitted_phase"] = r.fitted_phase;
    summary["fit_above_one"] = r.fit_above_one;
    summary["lambda"] = r.lambda;
    summary["histogram"] = {{"bins", hist.bin_count}, {"counts", hist.counts}, {"normalized", json_array(hist.normalized)}};
    emit(a, table.str(), summary, out);
    return kExitOk;
}

int cmd_ensemble(const CommonArgs& a, std::ostream& out) {
    const auto t0 = std::chrono::steady_clock::now();
    const Settings s = resolve(a);
    const auto cfg = s.experiment();
    const auto engine = s.engine();
    const auto e = run_ensemble(cfg, engine, cfg.runs, cfg.seed, {a.workers, s.run_options()});

    CsvTable table("ensemble", s, {"m", "mean_visibility", "q25", "q75", "variance"});
    for (int i = 0; i < e.steps(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        table.add_row({static_cast<double>(i + 1), e.per_step_mean[k], e.per_step_lower_quartile[k],
                       e.per_step_upper_quartile[k], e.variance_estimate_trace[k]});
    }
    const double lambda = lambda_visibility(cfg.condensate_1.mean_n, cfg.condensate_2.mean_n, cfg.gamma_ratio);
    auto summary = summary_skeleton("ensemble", s);
    summary["runs"] = e.runs;
    summary["final_visibility"] = e.per_step_mean.back();
    summary["final_q25"] = e.per_step_lower_quartile.back();
    summary["final_q75"] = e.per_step_upper_quartile.back();
    summary["final_stderr"] = e.per_step_stderr.back();
    summary["mean_fitted_visibility"] = e.mean_fitted_visibility;
    summary["reference_visibility"] = both_thermal(cfg) ? std::numbers::pi / 4.0 * lambda : lambda;
    summary["variance_trace"] = json_array(e.variance_estimate_trace);
    if (a.timing) summary["wall_time_seconds"] = seconds_since(t0);
    emit(a, table.str(), summary, out);
    return kExitOk;
}

int cmd_variance(const CommonArgs& a, std::ostream& out) {
    const Settings s = resolve(a);
    const auto cfg = s.experiment();
    const auto e = run_ensemble(cfg, s.engine(), cfg.runs, cfg.seed, {a.workers, s.run_options()});
    const double lambda = lambda_visibility(cfg.condensate_1.mean_n, cfg.condensate_2.mean_n, cfg.gamma_ratio);
    const double m_min = s.get_double("variance.m_min");
    const double m_max = cfg.detections;

    CsvTable table("variance", s, {"m", "variance", "reference", "clamped"});
    std::vector<std::pair<double, double>> trace;
    auto summary = summary_skeleton("variance", s);
    auto deviations = nlohmann::ordered_json::object();
    for (int i = 0; i < e.steps(); ++i) {
        const double m = i + 1;
        if (m < m_min) continue;
        const auto v = variance_from_visibility(lambda, e.per_step_mean[static_cast<std::size_t>(i)]);
        table.add_row({m, v.value, 1.0 / m, v.clamped ? 1.0 : 0.0});
        trace.emplace_back(m, v.value);
        if (m == 100.0 || m == m_max) deviations[std::to_string(static_cast<int>(m))] = std::abs(v.value * m - 1.0);
    }
    const auto fit = fit_reciprocal_law(trace, m_min, m_max);
    summary["final_visibility"] = e.per_step_mean.back();
    summary["lambda"] = lambda;
    summary["slope_fits"] = {{"reciprocal_coefficient", fit.coefficient},
                             {"rms_relative_residual", fit.rms_relative_residual},
                             {"relative_deviation_from_inverse_m", deviations}};
    emit(a, table.str(), summary, out);
    return kExitOk;
}

int cmd_slope(const CommonArgs& a, std::ostream& out) {
    const Settings s = resolve(a);
    const auto base = s.experiment();
    const auto ratios = s.get_double_list("slope.ratios");
    const long long atoms = s.get_int("slope.atoms");
    const long long steps = s.get_int("slope.detections");
    const long long runs = s.get_int("slope.runs");
    const int fit_from = static_cast<int>(s.get_int("slope.fit_from"));
    const auto engine = parse_engine(s.get("slope.engine"));
    if (atoms < 1 || steps < 1 || runs < 1) throw ConfigError("slope.atoms, slope.detections and slope.runs must be positive");
    if (engine == Engine::PiExact) throw ConfigError("slope.engine must be fock-trajectory or phase-filter");

    std::vector<std::string> columns{"m"};
    std::vector<std::vector<double>> curves;
    auto fits = nlohmann::ordered_json::array();
    for (double ratio : ratios) {
        if (!(ratio > 0.0)) throw ConfigError("slope.ratios must be positive");
        ExperimentConfig c = base;
        const auto n = static_cast<std::uint64_t>(atoms);
        c.condensate_1 = engine == Engine::FockTrajectory ? CondensateSpec::fock(n) : CondensateSpec::poisson(atoms);
        c.condensate_2 = c.condensate_1;
        c.gamma_ratio = ratio;
        c.detections = static_cast<int>(steps);
        const auto e = run_ensemble(c, engine, static_cast<int>(runs), c.seed, {a.workers, s.run_options()});
        std::vector<std::pair<double, double>> trace;
        for (int i = 0; i < e.steps(); ++i)
            trace.emplace_back(i + 1, 1.0 / e.mean_inverse_spread_trace[static_cast<std::size_t>(i)]);
        const double lambda = lambda_visibility(c.condensate_1.mean_n, c.condensate_2.mean_n, ratio);
        fits.push_back({{"ratio", ratio},
                        {"lambda", lambda},
                        {"slope", fit_inverse_slope(trace, fit_from)},
                        {"predicted", 1.0 - std::sqrt(1.0 - lambda * lambda)}});
        columns.push_back("inverse_spread_" + format_double(ratio));
        curves.push_back(e.mean_inverse_spread_trace);
    }
    CsvTable table("slope", s, columns);
    for (long long i = 0; i < steps; ++i) {
        std::vector<double> row{static_cast<double>(i + 1)};
        for (const auto& c : curves) row.push_back(c[static_cast<std::size_t>(i)]);
        table.add_row(row);
    }
    auto summary = summary_skeleton("slope", s);
    summary["engine"] = std::string(to_string(engine));
    summary["slope_fits"] = fits;
    emit(a, table.str(), summary, out);
    return kExitOk;
}

int cmd_validate(const CommonArgs& a, double perturbation, const std::vector<std::string>& files,
                 std::ostream& out) {
    bool ok = true;
    auto files_json = nlohmann::ordered_json::array();
    for (const auto& f : files) {
        const auto check = check_schema_file(f);
        out << (check.ok ? "PASS" : "FAIL") << "  schema  " << check.message << '\n';
        files_json.push_back({{"path", f}, {"pass", check.ok}, {"message", check.message}});
        ok = ok && check.ok;
    }
    ValidationOptions opts;
    opts.lambda_perturbation = perturbation;
    const auto report = run_validation(opts);
    auto checks = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        out << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  max_deviation=" << format_double(c.max_deviation)
            << "  tolerance=" << format_double(c.tolerance) << '\n';
        checks.push_back({{"name", c.name}, {"max_deviation", json_number(c.max_deviation)},
                          {"tolerance", c.tolerance}, {"pass", c.pass}});
    }
    ok = ok && report.all_passed();
    out << (ok ? "all checks passed" : "validation FAILED") << '\n';
    if (!a.summary.empty()) {
        auto summary = summary_skeleton("validate", resolve(a));
        summary["oracle_report"] = {{"lambda_perturbation", perturbation},
                                    {"passed", ok},
                                    {"checks", checks},
                                    {"files", files_json}};
        write_output(a.summary, summary.dump(2) + "\n", out);
    }
    return ok ? kExitOk : kExitValidation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Measurement-induced relative phase between two condensates"};
    app.name("becphase");
    app.require_subcommand(1);

    CommonArgs common;
    auto* curve = app.add_subcommand("visibility-curve", "one-detection visibility versus net rate ratio");
    add_common(*curve, common, false);

    auto* run = app.add_subcommand("run", "single stochastic detection run");
    add_common(*run, common, true);
    std::uint64_t run_index = 0;
    run->add_option("--run-index", run_index, "stream index of the run");

    auto* ensemble = app.add_subcommand("ensemble", "per-step conditional visibility over many runs");
    add_common(*ensemble, common, true);

    auto* variance = app.add_subcommand("variance", "phase variance 2 (lambda - lambda') against 1/m");
    add_common(*variance, common, true);

    auto* slope = app.add_subcommand("slope", "growth rate of the inverse phase spread");
    add_common(*slope, common, true);

    auto* validate = app.add_subcommand("validate", "cross-engine oracle suite and output schema checks");
    add_common(*validate, common, false);
    double perturbation = 0.0;
    std::vector<std::string> files;
    validate->add_option("--perturb-lambda", perturbation, "relative lambda perturbation injected into the filter");
    validate->add_option("--check-file", files, "output file whose schema version must be known");

    std::vector<std::string> argv_store{"becphase"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*curve) return cmd_visibility_curve(common, out);
        if (*run) return cmd_run(common, run_index, out);
        if (*ensemble) return cmd_ensemble(common, out);
        if (*variance) return cmd_variance(common, out);
        if (*slope) return cmd_slope(common, out);
        if (*validate) return cmd_validate(common, perturbation, files, out);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace becphase::cli
