#pragma once

// Relative-phase distribution filter for Poissonian mixtures.
//
// Each detection at phi multiplies the phase distribution f(psi) by
// [1 + lambda cos(phi - psi)] and renormalizes. Thermal states are handled
// as an exponential mixture of Poissonians, one (x1, x2) draw per run.

#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "becphase/phase_axis.hpp"

namespace becphase {

class CounterRng;

/// f(psi_k) at psi_k = 2 pi k / G, normalized so the grid mean is 1.
class PhaseGrid {
  public:
    /// The flat distribution f_0 = 1 on `points` grid points.
    static PhaseGrid uniform(int points);
    /// Normalizes arbitrary nonnegative samples to mean 1.
    static PhaseGrid from_values(std::vector<double> values);

    int size() const { return static_cast<int>(values_.size()); }
    std::span<const double> values() const { return values_; }
    double operator[](int k) const { return values_[static_cast<std::size_t>(k)]; }

    /// Multiplies in one detection and renormalizes in place. Returns the
    /// normalizer, which is the predictive density of that detection.
    double apply_detection(const PhaseAxis& axis, double lambda, double detected_phase);

  private:
    explicit PhaseGrid(std::vector<double> values) : values_(std::move(values)) {}
    std::vector<double> values_;
};

struct FilterStep {
    PhaseGrid grid;
    double normalizer;
};

struct PhaseStats {
    static constexpr double kUniformVariance = std::numeric_limits<double>::infinity();

    double mean_phase = 0.0;
    double variance = kUniformVariance;  // wrapped-Gaussian -2 log R
    double circular_spread = 1.0;        // 1 - R^2
};

struct MixtureDraw {
    double x1;
    double x2;
    double lambda;
};

/// 2 sqrt(G n1 n2) / (n1 + G n2); zero when either mean vanishes.
double lambda_visibility(double n1_bar, double n2_bar, double gamma);

FilterStep filter_update(const PhaseAxis& axis, const PhaseGrid& f, double lambda, double detected_phase);

/// 1 + lambda * integral cos(phi - psi) f(psi) dpsi / 2 pi, as a harmonic.
FringeHarmonic predictive_harmonic(const PhaseAxis& axis, const PhaseGrid& f, double lambda);
std::vector<double> predictive_density(const PhaseAxis& axis, const PhaseGrid& f, double lambda);

/// Circular statistics of f. Below |first moment| = 1e-6 the variance is
/// reported as PhaseStats::kUniformVariance.
PhaseStats phase_stats(const PhaseAxis& axis, const PhaseGrid& f);

/// Draws exponential Poisson means (x1, x2) with means (n1, n2) and the
/// matching filter contrast.
MixtureDraw thermal_mixture_draw(CounterRng& rng, double n1_bar, double n2_bar, double gamma);

}  // namespace becphase
