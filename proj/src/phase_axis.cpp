#include "becphase/phase_axis.hpp"

#include <cmath>
#include <stdexcept>

#include "becphase/log_polar.hpp"

namespace becphase {

PhaseAxis::PhaseAxis(int points) {
    if (points < 2) throw std::invalid_argument("phase axis needs at least two points");
    const auto n = static_cast<std::size_t>(points);
    angles_.resize(n);
    cos_.resize(n);
    sin_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        angles_[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        cos_[j] = std::cos(angles_[j]);
        sin_[j] = std::sin(angles_[j]);
    }
}

std::complex<double> PhaseAxis::first_moment(std::span<const double> values) const {
    if (values.size() != angles_.size()) throw std::invalid_argument("density size does not match the phase axis");
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        re += values[j] * cos_[j];
        im += values[j] * sin_[j];
    }
    const double n = static_cast<double>(values.size());
    return {re / n, im / n};
}

double FringeHarmonic::at(double phi) const { return 1.0 + visibility * std::cos(phi - phase); }

std::vector<double> FringeHarmonic::evaluate(const PhaseAxis& axis) const {
    const double c = visibility * std::cos(phase);
    const double s = visibility * std::sin(phase);
    const auto cs = axis.cosines();
    const auto sn = axis.sines();
    std::vector<double> out(cs.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = 1.0 + c * cs[j] + s * sn[j];
    return out;
}

FringeHarmonic first_harmonic(const PhaseAxis& axis, std::span<const double> density) {
    double mean = 0.0;
    for (double v : density) mean += v;
    mean /= static_cast<double>(density.size());
    if (!(mean > 0.0)) return {0.0, 0.0, true};
    const auto m1 = axis.first_moment(density) / mean;
    return {2.0 * std::abs(m1), wrap_phase(std::arg(m1)), false};
}

}  // namespace becphase
