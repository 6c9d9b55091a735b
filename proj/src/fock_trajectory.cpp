#include "becphase/fock_trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "becphase/log_polar.hpp"

namespace becphase {

NumberStateVector::NumberStateVector(std::uint64_t n1, std::uint64_t n2) : n1_(n1), n2_(n2), amps_{{1.0, 0.0}} {
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("number-state trajectory needs two occupied condensates");
}

void NumberStateVector::step(double detected_phase, double gamma, const TrajectoryOptions& options) {
    const int m = detections();
    const double limit = options.guard_fraction * static_cast<double>(std::min(n1_, n2_));
    if (static_cast<double>(m) >= limit)
        throw TrajectoryRangeError("detection " + std::to_string(m + 1) +
                                   " leaves the 1 << m << N regime (guard m < " + std::to_string(limit) + ")");

    const double a1 = std::sqrt(static_cast<double>(n1_));
    const std::complex<double> a2 = std::polar(std::sqrt(gamma * static_cast<double>(n2_)), -detected_phase);

    // C_n(m+1) = sqrt(N1) C_{n-1}(m) + sqrt(G N2) e^{-i phi} C_n(m)
    amps_.push_back(a1 * amps_.back());
    for (std::size_t n = amps_.size() - 2; n >= 1; --n) amps_[n] = a1 * amps_[n - 1] + a2 * amps_[n];
    amps_[0] *= a2;

    double norm = 0.0;
    for (const auto& c : amps_) norm += std::norm(c);
    const double scale = std::sqrt(norm);
    for (auto& c : amps_) c /= scale;
    renorm_log_ += std::log(scale);
}

NumberStateVector trajectory_step(NumberStateVector state, double detected_phase, double gamma,
                                  const TrajectoryOptions& options) {
    state.step(detected_phase, gamma, options);
    return state;
}

double lambda_number_state(std::uint64_t n1, std::uint64_t n2, double gamma) {
    return lambda_visibility(static_cast<double>(n1), static_cast<double>(n2), gamma);
}

PhaseGrid phase_profile(const NumberStateVector& state, const PhaseAxis& axis) {
    const auto& amps = state.amplitudes();
    double total = 0.0;
    for (const auto& c : amps) total += std::norm(c);

    std::vector<double> values(static_cast<std::size_t>(axis.size()));
    for (int j = 0; j < axis.size(); ++j) {
        // Horner in w = e^{-i phi}
        const std::complex<double> w = std::polar(1.0, -axis.angle(j));
        std::complex<double> f{0.0, 0.0};
        for (auto it = amps.rbegin(); it != amps.rend(); ++it) f = f * w + *it;
        values[static_cast<std::size_t>(j)] = std::norm(f) / total;
    }
    return PhaseGrid::from_values(std::move(values));
}

std::complex<double> relative_phase_expectation(const NumberStateVector& state) {
    const auto& amps = state.amplitudes();
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t n = 0; n + 1 < amps.size(); ++n) acc += std::conj(amps[n + 1]) * amps[n];
    return acc;
}

double delta_phi(const NumberStateVector& state) {
    const auto e = relative_phase_expectation(state);
    return std::clamp(1.0 - std::norm(e), 0.0, 1.0);
}

FringeHarmonic trajectory_predictive_harmonic(const NumberStateVector& state, double lambda_n) {
    // integral |F|^2 e^{i psi} dpsi / 2 pi = conj(<e^{i dphi}>)
    const auto m1 = std::conj(relative_phase_expectation(state));
    return {lambda_n * std::abs(m1), wrap_phase(std::arg(m1)), false};
}

}  // namespace becphase
