#include "becphase/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace becphase {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kGaussianTailSigmas = 8.0;

double log_sum_exp(std::span<const double> xs) {
    double top = kNegInf;
    for (double x : xs) top = std::max(top, x);
    if (top == kNegInf) return kNegInf;
    double sum = 0.0;
    for (double x : xs) sum += std::exp(x - top);
    return top + std::log(sum);
}

// Discretized Gaussian on the nonnegative integers, truncated at +-8 sigma;
// returns log <n!/(n-factors)!>.
double gaussian_log_moment_numeric(double mean, double variance, int factors) {
    const double sigma = std::sqrt(variance);
    if (sigma == 0.0) {
        const double n = std::max(0.0, std::round(mean));
        if (factors > n) return kNegInf;
        return std::lgamma(n + 1.0) - std::lgamma(n - factors + 1.0);
    }
    const auto lo = static_cast<long long>(std::max(0.0, std::ceil(mean - kGaussianTailSigmas * sigma)));
    const auto hi = static_cast<long long>(std::floor(mean + kGaussianTailSigmas * sigma));
    std::vector<double> log_w;
    std::vector<double> log_terms;
    for (long long n = lo; n <= hi; ++n) {
        const double d = (static_cast<double>(n) - mean) / sigma;
        const double lw = -0.5 * d * d;
        log_w.push_back(lw);
        if (n >= factors) {
            const double nn = static_cast<double>(n);
            log_terms.push_back(lw + std::lgamma(nn + 1.0) - std::lgamma(nn - factors + 1.0));
        }
    }
    if (log_w.empty() || log_terms.empty()) return kNegInf;
    return log_sum_exp(log_terms) - log_sum_exp(log_w);
}

// <n^2> - <n> from the first two Gaussian moments, floored at zero.
double gaussian_second_factorial(const CondensateSpec& spec) {
    return std::max(0.0, spec.variance + spec.mean_n * spec.mean_n - spec.mean_n);
}

}  // namespace

std::string_view to_string(Distribution kind) {
    switch (kind) {
        case Distribution::Fock: return "fock";
        case Distribution::Poisson: return "poisson";
        case Distribution::Thermal: return "thermal";
        case Distribution::Gaussian: return "gaussian";
    }
    return "unknown";
}

Distribution parse_distribution(std::string_view name) {
    if (name == "fock") return Distribution::Fock;
    if (name == "poisson") return Distribution::Poisson;
    if (name == "thermal") return Distribution::Thermal;
    if (name == "gaussian") return Distribution::Gaussian;
    throw ConfigError("unknown distribution kind '" + std::string(name) + "'");
}

CondensateSpec CondensateSpec::fock(std::uint64_t n) {
    return {Distribution::Fock, static_cast<double>(n), n, 0.0};
}

CondensateSpec CondensateSpec::poisson(double mean) {
    return {Distribution::Poisson, mean, 0, 0.0};
}

CondensateSpec CondensateSpec::thermal(double mean) {
    return {Distribution::Thermal, mean, 0, 0.0};
}

CondensateSpec CondensateSpec::gaussian(double mean, double variance) {
    return {Distribution::Gaussian, mean, 0, variance};
}

void CondensateSpec::validate() const {
    if (!std::isfinite(mean_n) || mean_n < 0.0) throw ConfigError("condensate mean must be a finite nonnegative number");
    switch (kind) {
        case Distribution::Fock:
            if (mean_n != static_cast<double>(exact_n))
                throw ConfigError("number state requires mean_n == exact_n");
            break;
        case Distribution::Gaussian:
            if (!std::isfinite(variance) || variance < 0.0)
                throw ConfigError("gaussian condensate requires a nonnegative variance");
            break;
        case Distribution::Poisson:
        case Distribution::Thermal:
            break;
    }
}

void ExperimentConfig::validate() const {
    condensate_1.validate();
    condensate_2.validate();
    if (!(gamma_ratio > 0.0) || !std::isfinite(gamma_ratio)) throw ConfigError("gamma must be positive");
    if (detections < 1) throw ConfigError("detections must be positive");
    if (grid_points < 64) throw ConfigError("grid_points must be at least 64");
    if (histogram_bins < 2) throw ConfigError("histogram_bins must be at least 2");
    if (runs < 1) throw ConfigError("runs must be positive");
}

double falling_factorial_moment(const CondensateSpec& spec, int order) {
    if (order < 0) throw std::invalid_argument("falling factorial order must be nonnegative");
    const int factors = order + 1;
    switch (spec.kind) {
        case Distribution::Fock: {
            double product = 1.0;
            for (int j = 0; j < factors; ++j) {
                const double term = static_cast<double>(spec.exact_n) - j;
                if (term <= 0.0) return 0.0;
                product *= term;
            }
            return product;
        }
        case Distribution::Poisson:
            return std::pow(spec.mean_n, factors);
        case Distribution::Thermal:
            return std::tgamma(factors + 1.0) * std::pow(spec.mean_n, factors);
        case Distribution::Gaussian:
            if (order == 0) return spec.mean_n;
            if (order == 1) return gaussian_second_factorial(spec);
            return std::exp(gaussian_log_moment_numeric(spec.mean_n, spec.variance, factors));
    }
    return 0.0;
}

double log_falling_factorial_moment(const CondensateSpec& spec, int factors) {
    if (factors < 0) throw std::invalid_argument("factor count must be nonnegative");
    if (factors == 0) return 0.0;
    const double log_mean = spec.mean_n > 0.0 ? std::log(spec.mean_n) : kNegInf;
    switch (spec.kind) {
        case Distribution::Fock: {
            const auto n = spec.exact_n;
            if (static_cast<std::uint64_t>(factors) > n) return kNegInf;
            const double nn = static_cast<double>(n);
            return std::lgamma(nn + 1.0) - std::lgamma(nn - factors + 1.0);
        }
        case Distribution::Poisson:
            return factors * log_mean;
        case Distribution::Thermal:
            return std::lgamma(factors + 1.0) + factors * log_mean;
        case Distribution::Gaussian:
            if (factors == 1) return log_mean;
            if (factors == 2) {
                const double f = gaussian_second_factorial(spec);
                return f > 0.0 ? std::log(f) : kNegInf;
            }
            return gaussian_log_moment_numeric(spec.mean_n, spec.variance, factors);
    }
    return kNegInf;
}

double visibility_one_detection(const CondensateSpec& first, const CondensateSpec& second,
                                double gamma) {
    if (first.empty() || second.empty()) return 0.0;
    const double cross = 2.0 * gamma * first.mean_n * second.mean_n;
    const double denom = falling_factorial_moment(first, 1) +
                         gamma * gamma * falling_factorial_moment(second, 1) + cross;
    if (!(denom > 0.0)) return 0.0;
    return std::clamp(cross / denom, 0.0, 1.0);
}

std::vector<VisibilityPoint> visibility_curve(const CondensateSpec& first,
                                              const CondensateSpec& second,
                                              std::span<const double> ratios,
                                              RatioAxis axis) {
    first.validate();
    second.validate();
    if (first.empty() || second.empty()) throw std::invalid_argument("visibility curve needs nonempty condensates");
    std::vector<VisibilityPoint> out;
    out.reserve(ratios.size());
    for (double r : ratios) {
        if (!(r > 0.0)) throw std::invalid_argument("ratio grid must be strictly positive");
        double v = 0.0;
        if (axis == RatioAxis::ScaleGamma) {
            v = visibility_one_detection(first, second, r * first.mean_n / second.mean_n);
        } else {
            CondensateSpec scaled = second;
            const double target = r * first.mean_n;
            if (scaled.kind == Distribution::Fock) {
                scaled = CondensateSpec::fock(static_cast<std::uint64_t>(std::llround(target)));
            } else {
                if (scaled.kind == Distribution::Gaussian) scaled.variance *= target / second.mean_n;
                scaled.mean_n = target;
            }
            v = visibility_one_detection(first, scaled, 1.0);
        }
        out.push_back({r, v});
    }
    return out;
}

std::vector<double> log_spaced_ratios(double lo, double hi, int points) {
    if (!(lo > 0.0) || !(hi > lo) || points < 2) throw std::invalid_argument("invalid ratio grid bounds");
    std::vector<double> out(static_cast<std::size_t>(points));
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < points; ++i) {
        double r = std::exp(a + (b - a) * i / (points - 1));
        if (std::abs(r - 1.0) < 1e-12) r = 1.0;
        out[static_cast<std::size_t>(i)] = r;
    }
    // exact endpoints keep the reciprocal symmetry of a symmetric grid
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace becphase
