#pragma once

// Stochastic detection runs and ensembles.
//
// A run alternates: evaluate the conditional density of the next detection,
// draw a phase from it by inverse CDF, update the engine state. Run r of an
// ensemble draws from the Philox stream keyed by (seed, r), step by step, so
// results never depend on the worker count.

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "becphase/model.hpp"
#include "becphase/phase_axis.hpp"
#include "becphase/rng.hpp"

namespace becphase {

enum class Engine { PiExact, PhaseFilter, FockTrajectory };

std::string_view to_string(Engine engine);
Engine parse_engine(std::string_view name);

/// Error raised inside run `run_index` at detection `step` (0-based).
class RunError : public std::runtime_error {
  public:
    RunError(std::uint64_t run_index, int step, const std::string& what);
    std::uint64_t run_index() const { return run_index_; }
    int step() const { return step_; }

  private:
    std::uint64_t run_index_;
    int step_;
};

struct DetectionTrace {
    std::vector<double> phases;
    /// Entry i is the conditional visibility after i + 1 detections, i.e.
    /// the fringe amplitude of the density for detection i + 2.
    std::vector<double> per_step_visibility;
    Engine engine = Engine::PiExact;
};

struct RunSummary {
    DetectionTrace trace;
    double fitted_visibility = 0.0;
    double fitted_phase = 0.0;
    bool fit_above_one = false;  // fitted beta > 1.05
    /// Entry i: phase spread after i + 1 detections. sigma^2 = 2 (lambda -
    /// lambda') for PiExact, wrapped-Gaussian variance for PhaseFilter, delta
    /// phi for FockTrajectory.
    std::vector<double> variance_trace;
    /// Filter contrast of the run; for PhaseFilter on thermal input, the
    /// exponential-mixture draw.
    double lambda = 0.0;
};

/// Inverse-CDF draw from a mean-normalized grid density on [0, 2 pi): the
/// cumulative trapezoid is inverted by linear interpolation.
double sample_phase(std::span<const double> density, double u);
double sample_phase(std::span<const double> density, CounterRng& rng);

/// Per-engine incremental state: current conditional density and updates.
class DetectionModel {
  public:
    virtual ~DetectionModel() = default;
    virtual FringeHarmonic harmonic() const = 0;
    virtual void record(double phase) = 0;
    virtual double spread() const = 0;
    virtual double lambda() const = 0;
};

struct RunOptions {
    double trajectory_guard = 0.1;
};

/// Checks that `config` can drive `engine` for config.detections steps.
void validate_engine(const ExperimentConfig& config, Engine engine, const RunOptions& options = {});

std::unique_ptr<DetectionModel> make_model(const ExperimentConfig& config, Engine engine, std::uint64_t run_index,
                                           const PhaseAxis& axis, const RunOptions& options = {});

/// One run, keyed by (config.seed, run_index).
RunSummary run_single(const ExperimentConfig& config, Engine engine, std::uint64_t run_index = 0,
                      const RunOptions& options = {});

struct EnsembleSummary {
    std::vector<double> per_step_mean;
    std::vector<double> per_step_lower_quartile;
    std::vector<double> per_step_median;
    std::vector<double> per_step_upper_quartile;
    std::vector<double> per_step_stderr;
    double mean_fitted_visibility = 0.0;
    std::vector<double> fitted_visibilities;  // by run index
    std::vector<double> variance_estimate_trace;   // mean of run variance traces
    std::vector<double> mean_inverse_spread_trace; // mean of 1 / variance trace
    int runs = 0;
    Engine engine = Engine::PiExact;

    int steps() const { return static_cast<int>(per_step_mean.size()); }
};

struct EnsembleOptions {
    int workers = 1;
    RunOptions run{};
};

/// Runs 0 .. run_count - 1 with streams keyed by (seed, run). Aggregation is
/// ordered by run index. The first failing run (lowest index) is rethrown
/// as RunError.
EnsembleSummary run_ensemble(const ExperimentConfig& config, Engine engine, int run_count, std::uint64_t seed,
                             const EnsembleOptions& options = {});

}  // namespace becphase
