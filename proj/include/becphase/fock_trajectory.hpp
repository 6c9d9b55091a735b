#pragma once

// Number-state trajectories in the regime 1 << m << N1, N2.
//
// After m detections |N1, N2> has become sum_n C_n |N1 - n> |N2 - m + n>,
// where n counts detections attributed to the first condensate. Each
// detection applies sqrt(N1) a-shift + sqrt(G N2) e^{-i phi} with the
// occupation square roots frozen at their initial values.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "becphase/phase_axis.hpp"
#include "becphase/phase_rep.hpp"

namespace becphase {

class TrajectoryRangeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct TrajectoryOptions {
    /// Steps are allowed while m < guard_fraction * min(N1, N2).
    double guard_fraction = 0.1;
};

class NumberStateVector {
  public:
    NumberStateVector(std::uint64_t n1, std::uint64_t n2);

    std::uint64_t n1() const { return n1_; }
    std::uint64_t n2() const { return n2_; }
    int detections() const { return static_cast<int>(amps_.size()) - 1; }
    const std::vector<std::complex<double>>& amplitudes() const { return amps_; }
    double renorm_log() const { return renorm_log_; }

    /// Applies one detection at `detected_phase` and renormalizes.
    /// Throws TrajectoryRangeError once m reaches the validity guard.
    void step(double detected_phase, double gamma, const TrajectoryOptions& options = {});

  private:
    std::uint64_t n1_;
    std::uint64_t n2_;
    std::vector<std::complex<double>> amps_;
    double renorm_log_ = 0.0;
};

NumberStateVector trajectory_step(NumberStateVector state, double detected_phase, double gamma,
                                  const TrajectoryOptions& options = {});

/// lambda for number states, 2 sqrt(G N1 N2) / (N1 + G N2).
double lambda_number_state(std::uint64_t n1, std::uint64_t n2, double gamma);

/// |F_m(phi)|^2 with F_m(phi) = sum_n C_n e^{-i n phi}, as a phase grid.
PhaseGrid phase_profile(const NumberStateVector& state, const PhaseAxis& axis);

/// <e^{i dphi}> = sum_n conj(C_{n+1}) C_n on the fixed-total-number subspace.
std::complex<double> relative_phase_expectation(const NumberStateVector& state);

/// 1 - <cos dphi>^2 - <sin dphi>^2, in [0, 1].
double delta_phi(const NumberStateVector& state);

/// Density of the next detection, 1 + lambda_N integral |F_m|^2 cos(phi - psi).
FringeHarmonic trajectory_predictive_harmonic(const NumberStateVector& state, double lambda_n);

}  // namespace becphase
