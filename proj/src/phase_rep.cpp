#include "becphase/phase_rep.hpp"

#include <cmath>
#include <stdexcept>

#include "becphase/log_polar.hpp"
#include "becphase/rng.hpp"

namespace becphase {

namespace {

constexpr double kUniformThreshold = 1e-6;

double grid_mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

PhaseGrid PhaseGrid::uniform(int points) {
    if (points < 2) throw std::invalid_argument("phase grid needs at least two points");
    return PhaseGrid(std::vector<double>(static_cast<std::size_t>(points), 1.0));
}

PhaseGrid PhaseGrid::from_values(std::vector<double> values) {
    if (values.size() < 2) throw std::invalid_argument("phase grid needs at least two points");
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("phase grid values must be finite and nonnegative");
    const double mean = grid_mean(values);
    if (!(mean > 0.0)) throw std::invalid_argument("phase grid must have positive mass");
    for (double& v : values) v /= mean;
    return PhaseGrid(std::move(values));
}

double PhaseGrid::apply_detection(const PhaseAxis& axis, double lambda, double detected_phase) {
    if (axis.size() != size()) throw std::invalid_argument("phase axis does not match grid");
    // cos(phi - psi) = cos phi cos psi + sin phi sin psi
    const double c = lambda * std::cos(detected_phase);
    const double s = lambda * std::sin(detected_phase);
    const auto cs = axis.cosines();
    const auto sn = axis.sines();
    double sum = 0.0;
    for (std::size_t j = 0; j < values_.size(); ++j) {
        values_[j] *= 1.0 + c * cs[j] + s * sn[j];
        sum += values_[j];
    }
    const double normalizer = sum / static_cast<double>(values_.size());
    for (double& v : values_) v /= normalizer;
    return normalizer;
}

double lambda_visibility(double n1_bar, double n2_bar, double gamma) {
    if (!(n1_bar > 0.0) || !(n2_bar > 0.0)) return 0.0;
    const double denom = n1_bar + gamma * n2_bar;
    return std::min(1.0, 2.0 * std::sqrt(gamma * n1_bar * n2_bar) / denom);
}

FilterStep filter_update(const PhaseAxis& axis, const PhaseGrid& f, double lambda, double detected_phase) {
    PhaseGrid next = f;
    const double n = next.apply_detection(axis, lambda, detected_phase);
    return {std::move(next), n};
}

FringeHarmonic predictive_harmonic(const PhaseAxis& axis, const PhaseGrid& f, double lambda) {
    const auto m1 = axis.first_moment(f.values());
    return {lambda * std::abs(m1), wrap_phase(std::arg(m1)), false};
}

std::vector<double> predictive_density(const PhaseAxis& axis, const PhaseGrid& f, double lambda) {
    return predictive_harmonic(axis, f, lambda).evaluate(axis);
}

PhaseStats phase_stats(const PhaseAxis& axis, const PhaseGrid& f) {
    const auto m1 = axis.first_moment(f.values());
    const double r = std::min(1.0, std::abs(m1));
    PhaseStats out;
    out.circular_spread = 1.0 - r * r;
    if (r < kUniformThreshold) return out;
    out.mean_phase = wrap_phase(std::arg(m1));
    out.variance = -2.0 * std::log(r);
    return out;
}

MixtureDraw thermal_mixture_draw(CounterRng& rng, double n1_bar, double n2_bar, double gamma) {
    if (!(n1_bar > 0.0) || !(n2_bar > 0.0)) throw std::invalid_argument("thermal mixture needs positive means");
    // inverse CDF of the exponential; 1 - u lies in (0, 1]
    const double x1 = -n1_bar * std::log1p(-rng.uniform());
    const double x2 = -n2_bar * std::log1p(-rng.uniform());
    return {x1, x2, lambda_visibility(x1, x2, gamma)};
}

}  // namespace becphase
