// Release criteria. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "becphase/analysis.hpp"
#include "becphase/cli/commands.hpp"
#include "becphase/cli/validate.hpp"
#include "becphase/model.hpp"
#include "becphase/montecarlo.hpp"
#include "becphase/phase_rep.hpp"
#include "becphase/rng.hpp"

using namespace becphase;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ExperimentConfig equal_rates(CondensateSpec spec) {
    ExperimentConfig c;
    c.condensate_1 = spec;
    c.condensate_2 = spec;
    c.detections = 500;
    return c;
}

// The 1000-run ensembles feed criteria 3, 4 and 5.
struct Ensembles {
    EnsembleSummary poisson;
    EnsembleSummary thermal;
};

const Ensembles& ensembles() {
    static const Ensembles e{
        run_ensemble(equal_rates(CondensateSpec::poisson(1000.0)), Engine::PiExact, 1000, 1),
        run_ensemble(equal_rates(CondensateSpec::thermal(1000.0)), Engine::PiExact, 1000, 1),
    };
    return e;
}

Outcome closed_forms() {
    const double vt = visibility_one_detection(CondensateSpec::thermal(1000.0), CondensateSpec::thermal(1000.0), 1.0);
    const double vp = visibility_one_detection(CondensateSpec::poisson(1000.0), CondensateSpec::poisson(1000.0), 1.0);
    const double vf = visibility_one_detection(CondensateSpec::fock(20), CondensateSpec::fock(20), 1.0);
    const double dev = std::max({std::abs(vt - 1.0 / 3.0), std::abs(vp - 0.5),
                                 std::abs(vf - 1.0 / (2.0 * (1.0 - 1.0 / 40.0)))});
    const auto ratios = log_spaced_ratios(0.01, 100.0, 101);
    bool peaks = true;
    for (const auto& spec : {CondensateSpec::fock(20), CondensateSpec::poisson(20.0), CondensateSpec::thermal(20.0)}) {
        const auto curve = visibility_curve(spec, spec, ratios);
        const auto best = std::max_element(curve.begin(), curve.end(), [](const auto& a, const auto& b) {
            return a.visibility < b.visibility;
        });
        peaks = peaks && best->ratio == 1.0;
    }
    return {dev <= 1e-12 && peaks, fmt("max deviation %.2e (tol 1e-12), all peaks at ratio 1: %s", dev,
                                       peaks ? "yes" : "no")};
}

Outcome engine_equivalence() {
    const auto report = cli::run_validation();
    const auto find = [&](std::string_view prefix) -> const cli::OracleCheck& {
        for (const auto& c : report.checks)
            if (c.name.starts_with(prefix)) return c;
        throw std::logic_error("missing oracle check");
    };
    const auto& pois = find("poisson pi-engine vs phase filter");
    const auto& fock = find("number-state pi-engine vs two-mode trace");
    return {pois.max_deviation <= 1e-6 && fock.max_deviation <= 1e-10,
            fmt("poisson vs filter %.2e (tol 1e-6), fock vs trace %.2e (tol 1e-10)", pois.max_deviation,
                fock.max_deviation)};
}

Outcome ensemble_means() {
    const auto& e = ensembles();
    const double p = e.poisson.per_step_mean.back();
    const double t = e.thermal.per_step_mean.back();
    const double quarter_pi = std::numbers::pi / 4.0;
    const bool ok = std::abs(p - 0.999) <= 0.002 && std::abs(t - 0.777) <= 0.02 && std::abs(t - quarter_pi) <= 0.02;
    return {ok, fmt("poisson %.5f (0.999 +- 0.002), thermal %.5f (0.777 +- 0.02, pi/4 +- 0.02), 1000 runs", p, t)};
}

Outcome fluctuation_ordering() {
    const auto& e = ensembles();
    int worst_m = 0;
    double worst_gap = INFINITY;
    for (int i = 49; i < e.poisson.steps(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        const double gap = (e.thermal.per_step_upper_quartile[k] - e.thermal.per_step_lower_quartile[k]) -
                           (e.poisson.per_step_upper_quartile[k] - e.poisson.per_step_lower_quartile[k]);
        if (gap < worst_gap) {
            worst_gap = gap;
            worst_m = i + 1;
        }
    }
    return {worst_gap > 0.0, fmt("smallest thermal-minus-poisson IQR %.4f at m = %d", worst_gap, worst_m)};
}

Outcome variance_law() {
    const auto& e = ensembles().poisson;
    std::vector<std::pair<double, double>> trace;
    for (int i = 49; i < e.steps(); ++i)
        trace.emplace_back(i + 1.0, variance_from_visibility(1.0, e.per_step_mean[static_cast<std::size_t>(i)]).value);
    const auto fit = fit_reciprocal_law(trace, 50, 500);
    const auto rel_dev = [&](int m) {
        return std::abs(trace[static_cast<std::size_t>(m - 50)].second * m - 1.0);
    };
    const double d100 = rel_dev(100), d500 = rel_dev(500);
    const bool ok = std::abs(fit.coefficient - 1.0) <= 0.15 && d500 < d100;
    return {ok, fmt("c = %.4f (1 +- 0.15), |m sigma^2 - 1| = %.4f at m=100, %.4f at m=500", fit.coefficient, d100,
                    d500)};
}

Outcome slope_law() {
    const std::vector<std::pair<double, double>> targets{{1.0, 0.97}, {0.5, 0.66}, {0.25, 0.41}};
    bool ok = true;
    std::string detail;
    for (const auto& [ratio, target] : targets) {
        ExperimentConfig c = equal_rates(CondensateSpec::fock(10000));
        c.gamma_ratio = ratio;
        c.detections = 200;
        const auto e = run_ensemble(c, Engine::FockTrajectory, 200, 1);
        std::vector<std::pair<double, double>> trace;
        for (int i = 0; i < e.steps(); ++i)
            trace.emplace_back(i + 1.0, 1.0 / e.mean_inverse_spread_trace[static_cast<std::size_t>(i)]);
        const double slope = fit_inverse_slope(trace, 20);
        ok = ok && std::abs(slope - target) <= 0.05;
        detail += fmt("%s%.4f (%.2f +- 0.05)", detail.empty() ? "slopes " : ", ", slope, target);
    }
    return {ok, detail + ", 200 runs each"};
}

Outcome thermal_average() {
    CounterRng rng(1, 0, StreamPurpose::MixtureDraw);
    const int n = 100000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double l = thermal_mixture_draw(rng, 1000.0, 1000.0, 1.0).lambda;
        s += l;
        s2 += l * l;
    }
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / (n - 1.0));
    const double z = (mean - std::numbers::pi / 4.0) / se;
    return {std::abs(z) <= 3.0, fmt("mean %.5f, pi/4 = %.5f, %.2f standard errors", mean, std::numbers::pi / 4.0, z)};
}

Outcome single_run_histograms() {
    const auto median = [](std::vector<double> v) { return quartiles(v).median; };
    const auto p = run_ensemble(equal_rates(CondensateSpec::poisson(1000.0)), Engine::PiExact, 100, 2);
    const auto t = run_ensemble(equal_rates(CondensateSpec::thermal(1000.0)), Engine::PiExact, 100, 2);
    const double mp = median(p.fitted_visibilities);
    const double mt = median(t.fitted_visibilities);
    return {mp >= 0.95 && mt >= 0.70 && mt <= 0.85,
            fmt("median fitted beta: poisson %.4f (>= 0.95), thermal %.4f (in [0.70, 0.85])", mp, mt)};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path() / "becphase_acceptance";
    std::filesystem::create_directories(dir);
    bool ok = true;
    int compared = 0;
    for (const std::string kind : {"poisson", "thermal"}) {
        std::vector<std::string> csv, json;
        for (const std::string workers : {"1", "1", "4"}) {
            const auto stem = dir / (kind + "_" + std::to_string(csv.size()));
            std::ostringstream out, err;
            const int code = cli::run_cli({"ensemble", "--kind", kind, "--runs", "64", "--workers", workers, "-o",
                                           stem.string() + ".csv", "--summary", stem.string() + ".json"},
                                          out, err);
            ok = ok && code == 0;
            csv.push_back(slurp(stem.string() + ".csv"));
            json.push_back(slurp(stem.string() + ".json"));
        }
        for (std::size_t i = 1; i < csv.size(); ++i) {
            ok = ok && !csv[0].empty() && csv[i] == csv[0] && json[i] == json[0];
            compared += 2;
        }
    }
    return {ok, fmt("%d file pairs compared (repeat and 1 vs 4 workers)", compared)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 closed-form visibilities", closed_forms},
        {"2 engine equivalence oracle", engine_equivalence},
        {"3 ensemble mean visibilities", ensemble_means},
        {"4 fluctuation ordering", fluctuation_ordering},
        {"5 variance law", variance_law},
        {"6 slope law", slope_law},
        {"7 thermal average visibility", thermal_average},
        {"8 single-run histograms", single_run_histograms},
        {"9 determinism", determinism},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << o.detail
                  << fmt("  [%.1f s]", secs) << std::endl;
        if (!o.pass) ++failures;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
