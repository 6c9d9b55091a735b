#pragma once

#include <complex>
#include <span>
#include <vector>

namespace becphase {

/// G uniform points phi_j = 2 pi j / G on [0, 2 pi), with cached cos/sin.
class PhaseAxis {
  public:
    explicit PhaseAxis(int points = 1024);

    int size() const { return static_cast<int>(angles_.size()); }
    double angle(int j) const { return angles_[static_cast<std::size_t>(j)]; }
    std::span<const double> angles() const { return angles_; }
    std::span<const double> cosines() const { return cos_; }
    std::span<const double> sines() const { return sin_; }

    /// Grid mean of values * e^{i phi}; the first circular moment of a
    /// mean-normalized density.
    std::complex<double> first_moment(std::span<const double> values) const;

  private:
    std::vector<double> angles_;
    std::vector<double> cos_;
    std::vector<double> sin_;
};

/// A density of the form 1 + visibility * cos(phi - phase).
struct FringeHarmonic {
    double visibility = 0.0;
    double phase = 0.0;
    bool degenerate = false;  // no information: every weight vanished

    double at(double phi) const;
    std::vector<double> evaluate(const PhaseAxis& axis) const;
};

/// Amplitude and position of the first circular harmonic of a mean-1 density.
FringeHarmonic first_harmonic(const PhaseAxis& axis, std::span<const double> density);

}  // namespace becphase
