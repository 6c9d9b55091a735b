#include "becphase/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "becphase/analysis.hpp"
#include "becphase/fock_trajectory.hpp"
#include "becphase/log_polar.hpp"
#include "becphase/phase_rep.hpp"
#include "becphase/pi_engine.hpp"

namespace becphase {

namespace {

constexpr double kFitNoiseCeiling = 1.05;

double nominal_lambda(const ExperimentConfig& c) {
    return lambda_visibility(c.condensate_1.mean_n, c.condensate_2.mean_n, c.gamma_ratio);
}

class PiExactModel final : public DetectionModel {
  public:
    explicit PiExactModel(const ExperimentConfig& c)
        : first_(c.condensate_1, c.detections + 1),
          second_(c.condensate_2, c.detections + 1),
          gamma_(c.gamma_ratio),
          lambda_(nominal_lambda(c)) {
        refresh();
    }

    FringeHarmonic harmonic() const override { return current_; }
    void record(double phase) override {
        poly_.update(phase);
        refresh();
    }
    double spread() const override { return variance_from_visibility(lambda_, current_.visibility).value; }
    double lambda() const override { return lambda_; }

  private:
    void refresh() { current_ = conditional_harmonic(poly_, weights(first_, second_, gamma_, poly_.degree())); }

    MomentTable first_;
    MomentTable second_;
    double gamma_;
    double lambda_;
    PiPolynomial poly_;
    FringeHarmonic current_;
};

class PhaseFilterModel final : public DetectionModel {
  public:
    PhaseFilterModel(const ExperimentConfig& c, std::uint64_t run_index, const PhaseAxis& axis)
        : axis_(axis), grid_(PhaseGrid::uniform(axis.size())) {
        // thermal condensates enter as exponential mixtures of Poissonians
        const bool mix1 = c.condensate_1.kind == Distribution::Thermal;
        const bool mix2 = c.condensate_2.kind == Distribution::Thermal;
        if (mix1 || mix2) {
            CounterRng rng(c.seed, run_index, StreamPurpose::MixtureDraw);
            const auto draw = thermal_mixture_draw(rng, c.condensate_1.mean_n, c.condensate_2.mean_n, c.gamma_ratio);
            const double x1 = mix1 ? draw.x1 : c.condensate_1.mean_n;
            const double x2 = mix2 ? draw.x2 : c.condensate_2.mean_n;
            lambda_ = lambda_visibility(x1, x2, c.gamma_ratio);
        } else {
            lambda_ = nominal_lambda(c);
        }
    }

    FringeHarmonic harmonic() const override { return predictive_harmonic(axis_, grid_, lambda_); }
    void record(double phase) override { grid_.apply_detection(axis_, lambda_, phase); }
    double spread() const override { return phase_stats(axis_, grid_).variance; }
    double lambda() const override { return lambda_; }

  private:
    const PhaseAxis& axis_;
    PhaseGrid grid_;
    double lambda_ = 0.0;
};

class FockTrajectoryModel final : public DetectionModel {
  public:
    FockTrajectoryModel(const ExperimentConfig& c, const RunOptions& options)
        : state_(c.condensate_1.exact_n, c.condensate_2.exact_n),
          gamma_(c.gamma_ratio),
          lambda_(lambda_number_state(c.condensate_1.exact_n, c.condensate_2.exact_n, c.gamma_ratio)),
          options_{options.trajectory_guard} {}

    FringeHarmonic harmonic() const override { return trajectory_predictive_harmonic(state_, lambda_); }
    void record(double phase) override { state_.step(phase, gamma_, options_); }
    double spread() const override { return delta_phi(state_); }
    double lambda() const override { return lambda_; }

  private:
    NumberStateVector state_;
    double gamma_;
    double lambda_;
    TrajectoryOptions options_;
};

struct StepStats {
    double mean, lower, median, upper, stderr_;
};

StepStats summarize(std::vector<double>& column) {
    const double n = static_cast<double>(column.size());
    double sum = 0.0;
    for (double v : column) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : column) ss += (v - mean) * (v - mean);
    const double sd = column.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    std::sort(column.begin(), column.end());
    return {mean, quantile_midpoint(column, 0.25), quantile_midpoint(column, 0.5), quantile_midpoint(column, 0.75),
            sd / std::sqrt(n)};
}

}  // namespace

std::string_view to_string(Engine engine) {
    switch (engine) {
        case Engine::PiExact: return "pi-exact";
        case Engine::PhaseFilter: return "phase-filter";
        case Engine::FockTrajectory: return "fock-trajectory";
    }
    return "unknown";
}

Engine parse_engine(std::string_view name) {
    if (name == "pi-exact") return Engine::PiExact;
    if (name == "phase-filter") return Engine::PhaseFilter;
    if (name == "fock-trajectory") return Engine::FockTrajectory;
    throw ConfigError("unknown engine '" + std::string(name) + "'");
}

RunError::RunError(std::uint64_t run_index, int step, const std::string& what)
    : std::runtime_error("run " + std::to_string(run_index) + ", detection " + std::to_string(step + 1) + ": " + what),
      run_index_(run_index),
      step_(step) {}

double sample_phase(std::span<const double> density, double u) {
    const std::size_t g = density.size();
    if (g < 2) throw std::invalid_argument("density grid needs at least two points");
    const double h = kTwoPi / static_cast<double>(g);
    std::vector<double> cdf(g + 1, 0.0);
    for (std::size_t j = 0; j < g; ++j) {
        const double a = density[j];
        const double b = density[(j + 1) % g];
        if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("density must be finite and nonnegative");
        cdf[j + 1] = cdf[j] + 0.5 * (a + b) * h;
    }
    const double total = cdf[g];
    if (!(total > 0.0)) throw std::invalid_argument("cannot sample from an all-zero density");
    const double target = std::clamp(u, 0.0, 1.0) * total;
    auto it = std::upper_bound(cdf.begin() + 1, cdf.end(), target);
    if (it == cdf.end()) it = cdf.end() - 1;
    const auto j = static_cast<std::size_t>(it - cdf.begin()) - 1;
    const double width = cdf[j + 1] - cdf[j];
    const double frac = width > 0.0 ? (target - cdf[j]) / width : 0.0;
    return wrap_phase((static_cast<double>(j) + frac) * h);
}

double sample_phase(std::span<const double> density, CounterRng& rng) { return sample_phase(density, rng.uniform()); }

void validate_engine(const ExperimentConfig& config, Engine engine, const RunOptions& options) {
    config.validate();
    const auto& c1 = config.condensate_1;
    const auto& c2 = config.condensate_2;
    switch (engine) {
        case Engine::PiExact:
            if (c1.kind == Distribution::Fock && c2.kind == Distribution::Fock &&
                static_cast<std::uint64_t>(config.detections) >= c1.exact_n + c2.exact_n)
                throw ConfigError("pi-exact: number states hold fewer atoms than detections + 1");
            break;
        case Engine::PhaseFilter:
            break;
        case Engine::FockTrajectory: {
            if (c1.kind != Distribution::Fock || c2.kind != Distribution::Fock)
                throw ConfigError("fock-trajectory engine needs number-state condensates");
            if (c1.exact_n == 0 || c2.exact_n == 0) throw ConfigError("fock-trajectory engine needs occupied condensates");
            const double limit = options.trajectory_guard * static_cast<double>(std::min(c1.exact_n, c2.exact_n));
            if (static_cast<double>(config.detections - 1) >= limit)
                throw ConfigError("fock-trajectory: detections exceed the 1 << m << N guard (m < " +
                                  std::to_string(limit) + ")");
            break;
        }
    }
}

std::unique_ptr<DetectionModel> make_model(const ExperimentConfig& config, Engine engine, std::uint64_t run_index,
                                           const PhaseAxis& axis, const RunOptions& options) {
    switch (engine) {
        case Engine::PiExact: return std::make_unique<PiExactModel>(config);
        case Engine::PhaseFilter: return std::make_unique<PhaseFilterModel>(config, run_index, axis);
        case Engine::FockTrajectory: return std::make_unique<FockTrajectoryModel>(config, options);
    }
    throw ConfigError("unknown engine");
}

namespace {

RunSummary run_single_on_axis(const ExperimentConfig& config, Engine engine, std::uint64_t run_index,
                              const PhaseAxis& axis, const RunOptions& options) {
    auto model = make_model(config, engine, run_index, axis, options);
    const CounterRng rng(config.seed, run_index, StreamPurpose::Detection);
    const auto steps = static_cast<std::size_t>(config.detections);

    RunSummary out;
    out.trace.engine = engine;
    out.lambda = model->lambda();
    out.trace.phases.reserve(steps);
    out.trace.per_step_visibility.reserve(steps);
    out.variance_trace.reserve(steps);

    FringeHarmonic h = model->harmonic();
    for (std::size_t step = 0; step < steps; ++step) {
        try {
            const auto density = h.evaluate(axis);
            const double phi = sample_phase(density, rng.uniform_at(step));
            model->record(phi);
            h = model->harmonic();
            out.trace.phases.push_back(phi);
            out.trace.per_step_visibility.push_back(std::clamp(h.visibility, 0.0, 1.0));
            out.variance_trace.push_back(model->spread());
        } catch (const RunError&) {
            throw;
        } catch (const std::exception& e) {
            throw RunError(run_index, static_cast<int>(step), e.what());
        }
    }
    const auto fit = fit_fringe(make_histogram(out.trace.phases, config.histogram_bins));
    out.fitted_visibility = fit.beta;
    out.fitted_phase = fit.phase;
    out.fit_above_one = fit.beta > kFitNoiseCeiling;
    return out;
}

}  // namespace

RunSummary run_single(const ExperimentConfig& config, Engine engine, std::uint64_t run_index,
                      const RunOptions& options) {
    validate_engine(config, engine, options);
    const PhaseAxis axis(config.grid_points);
    return run_single_on_axis(config, engine, run_index, axis, options);
}

EnsembleSummary run_ensemble(const ExperimentConfig& config, Engine engine, int run_count, std::uint64_t seed,
                             const EnsembleOptions& options) {
    if (run_count < 1) throw ConfigError("run count must be positive");
    ExperimentConfig cfg = config;
    cfg.seed = seed;
    cfg.runs = run_count;
    validate_engine(cfg, engine, options.run);
    const PhaseAxis axis(cfg.grid_points);

    const auto n_runs = static_cast<std::size_t>(run_count);
    std::vector<RunSummary> results(n_runs);
    std::vector<std::exception_ptr> errors(n_runs);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t r = next++; r < n_runs; r = next++) {
            try {
                results[r] = run_single_on_axis(cfg, engine, r, axis, options.run);
            } catch (...) {
                errors[r] = std::current_exception();
            }
        }
    };
    const int workers = std::clamp(options.workers, 1, run_count);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (std::size_t r = 0; r < n_runs; ++r) {
        if (!errors[r]) continue;
        try {
            std::rethrow_exception(errors[r]);
        } catch (const RunError&) {
            throw;
        } catch (const std::exception& e) {
            throw RunError(r, -1, e.what());
        }
    }

    const auto steps = static_cast<std::size_t>(cfg.detections);
    EnsembleSummary out;
    out.runs = run_count;
    out.engine = engine;
    out.per_step_mean.resize(steps);
    out.per_step_lower_quartile.resize(steps);
    out.per_step_median.resize(steps);
    out.per_step_upper_quartile.resize(steps);
    out.per_step_stderr.resize(steps);
    out.variance_estimate_trace.resize(steps);
    out.mean_inverse_spread_trace.resize(steps);

    std::vector<double> column(n_runs);
    for (std::size_t s = 0; s < steps; ++s) {
        double var_sum = 0.0;
        double inv_sum = 0.0;
        for (std::size_t r = 0; r < n_runs; ++r) {
            column[r] = results[r].trace.per_step_visibility[s];
            const double v = results[r].variance_trace[s];
            var_sum += v;
            inv_sum += 1.0 / v;
        }
        const auto st = summarize(column);
        out.per_step_mean[s] = st.mean;
        out.per_step_lower_quartile[s] = st.lower;
        out.per_step_median[s] = st.median;
        out.per_step_upper_quartile[s] = st.upper;
        out.per_step_stderr[s] = st.stderr_;
        out.variance_estimate_trace[s] = var_sum / static_cast<double>(n_runs);
        out.mean_inverse_spread_trace[s] = inv_sum / static_cast<double>(n_runs);
    }
    out.fitted_visibilities.resize(n_runs);
    double fit_sum = 0.0;
    for (std::size_t r = 0; r < n_runs; ++r) {
        out.fitted_visibilities[r] = results[r].fitted_visibility;
        fit_sum += results[r].fitted_visibility;
    }
    out.mean_fitted_visibility = fit_sum / static_cast<double>(n_runs);
    return out;
}

}  // namespace becphase
