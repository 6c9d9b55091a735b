#include "becphase/cli/validate.hpp"

#include <algorithm>
#include <cmath>

#include "becphase/fock_trajectory.hpp"
#include "becphase/model.hpp"
#include "becphase/montecarlo.hpp"
#include "becphase/oracle.hpp"
#include "becphase/phase_rep.hpp"
#include "becphase/pi_engine.hpp"
#include "becphase/rng.hpp"

namespace becphase::cli {

namespace {

double max_relative(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]) / std::abs(b[j]));
    return worst;
}

double max_absolute(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
    return worst;
}

std::vector<double> random_phases(std::uint64_t seed, std::uint64_t stream, int m) {
    CounterRng rng(seed, stream);
    std::vector<double> out(static_cast<std::size_t>(m));
    for (double& phi : out) phi = kTwoPi * rng.uniform();
    return out;
}

PiPolynomial polynomial_for(const std::vector<double>& phases) {
    PiPolynomial p;
    for (double phi : phases) p.update(phi);
    return p;
}

OracleCheck make_check(std::string name, double dev, double tol) {
    return {std::move(name), dev, tol, dev <= tol};
}

OracleCheck closed_forms() {
    const double thermal = visibility_one_detection(CondensateSpec::thermal(50), CondensateSpec::thermal(50), 1.0);
    const double poisson = visibility_one_detection(CondensateSpec::poisson(50), CondensateSpec::poisson(50), 1.0);
    const double fock = visibility_one_detection(CondensateSpec::fock(20), CondensateSpec::fock(20), 1.0);
    const double dev = std::max({std::abs(thermal - 1.0 / 3.0), std::abs(poisson - 0.5),
                                 std::abs(fock - 1.0 / (2.0 * (1.0 - 1.0 / 40.0)))});
    return make_check("closed-form one-detection visibilities", dev, 1e-12);
}

OracleCheck poisson_pi_vs_filter(const ValidationOptions& o) {
    const PhaseAxis axis(1024);
    double worst = 0.0;
    const double gammas[] = {1.0, 0.5};
    for (double gamma : gammas) {
        const auto s1 = CondensateSpec::poisson(1000.0);
        const auto s2 = CondensateSpec::poisson(1000.0);
        const double lambda = lambda_visibility(s1.mean_n, s2.mean_n, gamma) * (1.0 + o.lambda_perturbation);
        for (int m : {1, 5, 15, 50}) {
            const auto phases = random_phases(o.seed, static_cast<std::uint64_t>(m), m);
            const auto pi = conditional_density(polynomial_for(phases), weights(s1, s2, gamma, m), axis);
            auto grid = PhaseGrid::uniform(axis.size());
            for (double phi : phases) grid.apply_detection(axis, lambda, phi);
            worst = std::max(worst, max_relative(predictive_density(axis, grid, lambda), pi));
        }
    }
    return make_check("poisson pi-engine vs phase filter (m = 1, 5, 15, 50)", worst, 1e-6);
}

OracleCheck fock_pi_vs_trace() {
    const PhaseAxis axis(64);
    const std::vector<double> eval(axis.angles().begin(), axis.angles().end());
    double worst = 0.0;
    for (int n = 1; n <= 6; ++n) {
        for (double gamma : {1.0, 0.7}) {
            for (int m = 0; m <= std::min(3, 2 * n - 1); ++m) {
                const auto phases = random_phases(11, static_cast<std::uint64_t>(100 * n + m), m);
                const auto spec = CondensateSpec::fock(static_cast<std::uint64_t>(n));
                const auto pi = conditional_density(polynomial_for(phases), weights(spec, spec, gamma, m), axis);
                const auto p = oracle::fock_distribution(n);
                const auto ref = oracle::mixture_conditional_density(p, p, gamma, phases, eval);
                worst = std::max(worst, max_absolute(pi, ref));
            }
        }
    }
    return make_check("number-state pi-engine vs two-mode trace (N <= 6, m <= 3)", worst, 1e-10);
}

OracleCheck thermal_pi_vs_trace() {
    const PhaseAxis axis(64);
    const std::vector<double> eval(axis.angles().begin(), axis.angles().end());
    const double mean = 0.3;
    const auto p = oracle::thermal_distribution(mean, 30);
    double worst = 0.0;
    for (double gamma : {1.0, 0.6}) {
        for (int m = 1; m <= 3; ++m) {
            const auto phases = random_phases(13, static_cast<std::uint64_t>(m), m);
            const auto spec = CondensateSpec::thermal(mean);
            const auto pi = conditional_density(polynomial_for(phases), weights(spec, spec, gamma, m), axis);
            const auto ref = oracle::mixture_conditional_density(p, p, gamma, phases, eval);
            worst = std::max(worst, max_relative(pi, ref));
        }
    }
    return make_check("thermal pi-engine vs truncated two-mode trace (m <= 3)", worst, 1e-9);
}

OracleCheck trajectory_vs_filter(const ValidationOptions& o) {
    const PhaseAxis axis(1024);
    const std::uint64_t atoms = 10000;
    double worst = 0.0;
    for (double gamma : {1.0, 0.5, 0.25}) {
        const double lambda_n = lambda_number_state(atoms, atoms, gamma);
        const double lambda_f = lambda_n * (1.0 + o.lambda_perturbation);
        NumberStateVector state(atoms, atoms);
        auto grid = PhaseGrid::uniform(axis.size());
        const CounterRng rng(o.seed, 1000 + static_cast<std::uint64_t>(gamma * 100), StreamPurpose::Detection);
        for (int step = 0; step < 60; ++step) {
            const auto h = trajectory_predictive_harmonic(state, lambda_n);
            const double phi = sample_phase(h.evaluate(axis), rng.uniform_at(static_cast<std::uint64_t>(step)));
            state.step(phi, gamma);
            grid.apply_detection(axis, lambda_f, phi);
            if (state.detections() >= 20) {
                const auto a = trajectory_predictive_harmonic(state, lambda_n).evaluate(axis);
                worst = std::max(worst, max_relative(predictive_density(axis, grid, lambda_f), a));
            }
        }
    }
    return make_check("number-state trajectory vs phase filter (N = 1e4, 20 <= m <= 60)", worst, 1e-3);
}

OracleCheck filter_vs_product() {
    const PhaseAxis axis(1024);
    const std::vector<double> psi(axis.angles().begin(), axis.angles().end());
    double worst = 0.0;
    for (double lambda : {0.8, 0.9428}) {
        const auto phases = random_phases(17, static_cast<std::uint64_t>(lambda * 1000), 40);
        auto grid = PhaseGrid::uniform(axis.size());
        for (double phi : phases) grid.apply_detection(axis, lambda, phi);
        const std::vector<double> seq(grid.values().begin(), grid.values().end());
        worst = std::max(worst, max_relative(seq, oracle::product_filter(lambda, phases, psi)));
    }
    return make_check("sequential phase filter vs product form (m = 40)", worst, 1e-10);
}

}  // namespace

bool ValidationReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.pass; });
}

ValidationReport run_validation(const ValidationOptions& options) {
    ValidationReport r;
    r.checks.push_back(closed_forms());
    r.checks.push_back(poisson_pi_vs_filter(options));
    r.checks.push_back(fock_pi_vs_trace());
    r.checks.push_back(thermal_pi_vs_trace());
    r.checks.push_back(trajectory_vs_filter(options));
    r.checks.push_back(filter_vs_product());
    return r;
}

}  // namespace becphase::cli
