#pragma once

// Experiment configuration types and closed-form single-detection results.
//
// All positions enter only through the relative phase phi = (k1 - k2) x
// taken mod 2 pi, so nothing in the library represents x or the wave
// numbers individually.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace becphase {

class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum class Distribution { Fock, Poisson, Thermal, Gaussian };

std::string_view to_string(Distribution kind);
Distribution parse_distribution(std::string_view name);

/// Initial atom-number distribution of a single condensate mode.
///
/// `mean_n` is kept equal to `exact_n` for number states so that code working
/// on the rate ratio can treat every kind the same way.
struct CondensateSpec {
    Distribution kind = Distribution::Poisson;
    double mean_n = 0.0;
    std::uint64_t exact_n = 0;
    double variance = 0.0;

    static CondensateSpec fock(std::uint64_t n);
    static CondensateSpec poisson(double mean);
    static CondensateSpec thermal(double mean);
    static CondensateSpec gaussian(double mean, double variance);

    /// Throws ConfigError when the fields violate the per-kind invariants.
    void validate() const;
    bool empty() const { return mean_n <= 0.0; }

    bool operator==(const CondensateSpec&) const = default;
};

struct ExperimentConfig {
    CondensateSpec condensate_1 = CondensateSpec::poisson(1000.0);
    CondensateSpec condensate_2 = CondensateSpec::poisson(1000.0);
    double gamma_ratio = 1.0;  // gamma_2 / gamma_1
    int detections = 500;
    int grid_points = 1024;
    int histogram_bins = 25;
    int runs = 1000;
    std::uint64_t seed = 1;

    void validate() const;

    bool operator==(const ExperimentConfig&) const = default;
};

/// <n (n-1) ... (n-order)>, i.e. the falling factorial with order+1 factors.
double falling_factorial_moment(const CondensateSpec& spec, int order);

/// Natural log of the falling-factorial moment with `factors` factors
/// (factors = order + 1). Zero factors gives log 1 = 0; a vanishing moment
/// gives -infinity. Stays finite where the moment itself would overflow.
double log_falling_factorial_moment(const CondensateSpec& spec, int factors);

/// Fringe visibility of the conditional density for the second detection,
/// given one detection. Zero when either condensate is empty.
double visibility_one_detection(const CondensateSpec& first, const CondensateSpec& second,
                                double gamma);

/// How the relative net counting rate gamma * n2 / n1 is swept along a curve.
enum class RatioAxis {
    ScaleGamma,       // condensates fixed, gamma = ratio * n1 / n2
    ScaleSecondMean,  // gamma fixed at 1, second mean = ratio * n1 (rounded for Fock)
};

struct VisibilityPoint {
    double ratio;
    double visibility;
};

std::vector<VisibilityPoint> visibility_curve(const CondensateSpec& first,
                                              const CondensateSpec& second,
                                              std::span<const double> ratios,
                                              RatioAxis axis = RatioAxis::ScaleGamma);

/// `points` ratios spaced logarithmically over [lo, hi] inclusive.
std::vector<double> log_spaced_ratios(double lo, double hi, int points);

}  // namespace becphase
