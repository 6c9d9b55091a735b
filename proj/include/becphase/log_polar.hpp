#pragma once

// Complex numbers stored as (log |z|, arg z). Magnitudes far outside the
// double range (1e+-308) stay representable; zero is log_mag = -inf.

#include <complex>
#include <limits>
#include <numbers>

namespace becphase {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2 pi).
double wrap_phase(double angle);

struct LogPolar {
    double log_mag = -std::numeric_limits<double>::infinity();
    double phase = 0.0;

    static LogPolar one() { return {0.0, 0.0}; }
    static LogPolar zero() { return {}; }
    static LogPolar from_complex(std::complex<double> z);

    bool is_zero() const { return log_mag == -std::numeric_limits<double>::infinity(); }

    /// exp(log_scale + log_mag) e^{i phase}; overflows if the caller picks a bad scale.
    std::complex<double> to_complex(double log_scale = 0.0) const;
};

/// Complex sum with the larger magnitude factored out, so neither operand is
/// ever exponentiated on its own.
LogPolar add(const LogPolar& a, const LogPolar& b);

inline LogPolar multiply(const LogPolar& a, const LogPolar& b) {
    return {a.log_mag + b.log_mag, wrap_phase(a.phase + b.phase)};
}

/// a * e^{i angle}
inline LogPolar rotate(const LogPolar& a, double angle) {
    return {a.log_mag, wrap_phase(a.phase + angle)};
}

inline LogPolar conj(const LogPolar& a) { return {a.log_mag, wrap_phase(-a.phase)}; }

}  // namespace becphase
