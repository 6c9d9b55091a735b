#pragma once

#include <span>
#include <utility>
#include <vector>

namespace becphase {

/// Detection phases binned on [0, 2 pi). Plotted against phi / 2 pi the bin
/// centers sit at (j + 1/2) / bins.
struct FringeHistogram {
    int bin_count = 25;
    std::vector<long long> counts;
    std::vector<double> normalized;  // counts scaled to mean 1

    double bin_center(int j) const;
};

FringeHistogram make_histogram(std::span<const double> phases, int bins = 25);

struct FringeFit {
    double beta = 0.0;   // visibility
    double phase = 0.0;  // fringe maximum, in [0, 2 pi)
};

/// Linear least squares of y_j against {1, cos x_j, sin x_j} at the bin
/// centers; beta = sqrt(b^2 + c^2) / a. Needs at least three bins.
FringeFit fit_fringe(const FringeHistogram& hist);
FringeFit fit_fringe(std::span<const double> centers, std::span<const double> values);

struct VarianceEstimate {
    double value = 0.0;
    bool clamped = false;  // lambda' exceeded lambda; sampling noise
};

/// sigma^2 = 2 (lambda - lambda'), valid for small variances only.
VarianceEstimate variance_from_visibility(double lambda, double lambda_prime);

/// OLS slope of 1 / spread against m over the points with m >= fit_from.
/// Throws std::invalid_argument with fewer than five usable points.
double fit_inverse_slope(std::span<const std::pair<double, double>> trace, int fit_from);

struct ReciprocalFit {
    double coefficient = 0.0;  // c in variance ~ c / m
    double rms_relative_residual = 0.0;
};

/// Least squares of variance against c / m through the origin, over
/// m in [m_lo, m_hi].
ReciprocalFit fit_reciprocal_law(std::span<const std::pair<double, double>> trace, double m_lo, double m_hi);

struct Quartiles {
    double lower;
    double median;
    double upper;
};

/// Midpoint convention: the q-quantile of sorted x is the mean of
/// x[floor(h)] and x[ceil(h)] with h = (n - 1) q.
Quartiles quartiles(std::span<const double> values);
double quantile_midpoint(std::span<const double> sorted, double q);

}  // namespace becphase
