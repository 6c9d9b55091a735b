#include "becphase/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "becphase/log_polar.hpp"

namespace becphase {

double FringeHistogram::bin_center(int j) const { return kTwoPi * (j + 0.5) / bin_count; }

FringeHistogram make_histogram(std::span<const double> phases, int bins) {
    if (bins < 2) throw std::invalid_argument("histogram needs at least two bins");
    FringeHistogram h;
    h.bin_count = bins;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double phi : phases) {
        auto j = static_cast<long long>(std::floor(wrap_phase(phi) / kTwoPi * bins));
        j = std::clamp<long long>(j, 0, bins - 1);
        ++h.counts[static_cast<std::size_t>(j)];
    }
    h.normalized.assign(static_cast<std::size_t>(bins), 0.0);
    if (!phases.empty()) {
        const double scale = static_cast<double>(bins) / static_cast<double>(phases.size());
        for (int j = 0; j < bins; ++j)
            h.normalized[static_cast<std::size_t>(j)] = static_cast<double>(h.counts[static_cast<std::size_t>(j)]) * scale;
    }
    return h;
}

FringeFit fit_fringe(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("abscissa and values differ in length");
    if (x.size() < 3) throw std::invalid_argument("fringe fit needs at least three bins");

    // normal equations for [1, cos x, sin x]
    std::array<std::array<double, 4>, 3> a{};
    for (std::size_t j = 0; j < x.size(); ++j) {
        const std::array<double, 3> row{1.0, std::cos(x[j]), std::sin(x[j])};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) a[r][c] += row[r] * row[c];
            a[r][3] += row[r] * y[j];
        }
    }
    // Gaussian elimination with partial pivoting
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-14) throw std::invalid_argument("fringe fit design is singular");
        std::swap(a[col], a[piv]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    const double offset = a[0][3] / a[0][0];
    const double b = a[1][3] / a[1][1];
    const double c = a[2][3] / a[2][2];
    if (!(offset > 0.0)) return {};
    const double amp = std::hypot(b, c);
    // flat data: amplitude is pure rounding
    if (amp <= 1e-13 * std::abs(offset)) return {0.0, 0.0};
    return {amp / offset, wrap_phase(std::atan2(c, b))};
}

FringeFit fit_fringe(const FringeHistogram& hist) {
    std::vector<double> centers(static_cast<std::size_t>(hist.bin_count));
    for (int j = 0; j < hist.bin_count; ++j) centers[static_cast<std::size_t>(j)] = hist.bin_center(j);
    return fit_fringe(centers, hist.normalized);
}

VarianceEstimate variance_from_visibility(double lambda, double lambda_prime) {
    if (lambda_prime > lambda) return {0.0, true};
    return {2.0 * (lambda - lambda_prime), false};
}

double fit_inverse_slope(std::span<const std::pair<double, double>> trace, int fit_from) {
    if (fit_from < 1) throw std::invalid_argument("fit_from must be at least 1");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (const auto& [m, spread] : trace) {
        if (m < fit_from) continue;
        if (!(spread > 0.0)) throw std::invalid_argument("spread values must be positive");
        const double y = 1.0 / spread;
        sx += m;
        sy += y;
        sxx += m * m;
        sxy += m * y;
        ++n;
    }
    if (n < 5) throw std::invalid_argument("inverse-slope fit needs at least five points");
    const double denom = n * sxx - sx * sx;
    return (n * sxy - sx * sy) / denom;
}

ReciprocalFit fit_reciprocal_law(std::span<const std::pair<double, double>> trace, double m_lo, double m_hi) {
    double num = 0.0;
    double den = 0.0;
    int n = 0;
    for (const auto& [m, v] : trace) {
        if (m < m_lo || m > m_hi) continue;
        num += v / m;
        den += 1.0 / (m * m);
        ++n;
    }
    if (n < 2) throw std::invalid_argument("reciprocal fit needs at least two points");
    ReciprocalFit out;
    out.coefficient = num / den;
    double ss = 0.0;
    for (const auto& [m, v] : trace) {
        if (m < m_lo || m > m_hi) continue;
        const double pred = out.coefficient / m;
        ss += (v - pred) * (v - pred) / (pred * pred);
    }
    out.rms_relative_residual = std::sqrt(ss / n);
    return out;
}

double quantile_midpoint(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = static_cast<std::size_t>(std::ceil(h));
    return 0.5 * (sorted[lo] + sorted[hi]);
}

Quartiles quartiles(std::span<const double> values) {
    std::vector<double> s(values.begin(), values.end());
    std::sort(s.begin(), s.end());
    return {quantile_midpoint(s, 0.25), quantile_midpoint(s, 0.5), quantile_midpoint(s, 0.75)};
}

}  // namespace becphase
