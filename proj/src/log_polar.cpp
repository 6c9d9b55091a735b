#include "becphase/log_polar.hpp"

#include <cmath>

namespace becphase {

double wrap_phase(double angle) {
    if (angle >= 0.0 && angle < kTwoPi) return angle;
    double r = std::fmod(angle, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod of a tiny negative angle can round back up to exactly 2 pi
    if (r >= kTwoPi) r = 0.0;
    return r;
}

LogPolar LogPolar::from_complex(std::complex<double> z) {
    const double m = std::abs(z);
    if (m == 0.0) return zero();
    return {std::log(m), wrap_phase(std::arg(z))};
}

std::complex<double> LogPolar::to_complex(double log_scale) const {
    if (is_zero()) return {0.0, 0.0};
    return std::polar(std::exp(log_scale + log_mag), phase);
}

LogPolar add(const LogPolar& a, const LogPolar& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return b;
    const LogPolar& big = a.log_mag >= b.log_mag ? a : b;
    const LogPolar& small = a.log_mag >= b.log_mag ? b : a;
    const double r = std::exp(small.log_mag - big.log_mag);
    const double delta = small.phase - big.phase;
    const double re = r * std::cos(delta);
    const double im = r * std::sin(delta);
    // |1 + r e^{i delta}|^2 = 1 + 2 r cos(delta) + r^2
    const double norm_minus_one = 2.0 * re + r * r;
    if (norm_minus_one <= -1.0) return LogPolar::zero();
    return {big.log_mag + 0.5 * std::log1p(norm_minus_one), wrap_phase(big.phase + std::atan2(im, 1.0 + re))};
}

}  // namespace becphase
