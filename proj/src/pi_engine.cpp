#include "becphase/pi_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace becphase {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double top = std::max(a, b);
    return top + std::log1p(std::exp(-std::abs(a - b)));
}

void check_fock_capacity(const CondensateSpec& first, const CondensateSpec& second, int m) {
    if (first.kind != Distribution::Fock || second.kind != Distribution::Fock) return;
    if (static_cast<std::uint64_t>(m) >= first.exact_n + second.exact_n)
        throw ConfigError("number states exhausted: " + std::to_string(m) + " detections with only " +
                          std::to_string(first.exact_n + second.exact_n) + " atoms");
}

}  // namespace

PiPolynomial::PiPolynomial() : coeffs_{LogPolar::one()} {}

void PiPolynomial::update(double phase) {
    const double rot = -phase;
    coeffs_.push_back(rotate(coeffs_.back(), rot));
    for (std::size_t k = coeffs_.size() - 2; k >= 1; --k) coeffs_[k] = add(coeffs_[k], rotate(coeffs_[k - 1], rot));

    double top = kNegInf;
    for (const auto& c : coeffs_) top = std::max(top, c.log_mag);
    if (top != kNegInf && top != 0.0) {
        for (auto& c : coeffs_) c.log_mag -= top;
        global_log_scale_ += top;
    }
}

LogPolar PiPolynomial::coefficient(int k) const {
    LogPolar c = scaled(k);
    c.log_mag += global_log_scale_;
    return c;
}

std::complex<double> PiPolynomial::evaluate(std::complex<double> z) const {
    std::complex<double> acc{0.0, 0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + it->to_complex(global_log_scale_);
    return acc;
}

PiPolynomial pi_update(PiPolynomial poly, double new_phase) {
    poly.update(new_phase);
    return poly;
}

WeightVector::WeightVector(double lower_boundary, std::vector<double> interior, double upper_boundary)
    : lower_(lower_boundary), interior_(std::move(interior)), upper_(upper_boundary) {}

double WeightVector::term(int k) const {
    if (k == -1) return lower_;
    if (k == detections()) return upper_;
    return interior_.at(static_cast<std::size_t>(k));
}

bool WeightVector::all_zero() const {
    return lower_ == kNegInf && upper_ == kNegInf &&
           std::all_of(interior_.begin(), interior_.end(), [](double x) { return x == kNegInf; });
}

MomentTable::MomentTable(const CondensateSpec& spec, int max_factors) {
    if (max_factors < 0) throw std::invalid_argument("moment table size must be nonnegative");
    table_.resize(static_cast<std::size_t>(max_factors) + 1);
    for (int j = 0; j <= max_factors; ++j) table_[static_cast<std::size_t>(j)] = log_falling_factorial_moment(spec, j);
}

double MomentTable::log_moment(int factors) const { return table_.at(static_cast<std::size_t>(factors)); }

WeightVector weights(const MomentTable& first, const MomentTable& second, double gamma, int m) {
    if (m < 0) throw std::invalid_argument("detection count must be nonnegative");
    if (std::min(first.max_factors(), second.max_factors()) < m + 1)
        throw std::invalid_argument("moment table too small for the requested detection count");
    const double log_gamma = std::log(gamma);
    // term k: <n1 falling (m - k)> <n2 falling (k + 1)> G^{k+1}
    auto term = [&](int k) {
        const double a = first.log_moment(m - k);
        const double b = second.log_moment(k + 1);
        if (a == kNegInf || b == kNegInf) return kNegInf;
        return a + b + (k + 1) * log_gamma;
    };
    std::vector<double> interior(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) interior[static_cast<std::size_t>(k)] = term(k);
    return WeightVector(term(-1), std::move(interior), term(m));
}

WeightVector weights(const CondensateSpec& first, const CondensateSpec& second, double gamma, int m) {
    first.validate();
    second.validate();
    if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
    check_fock_capacity(first, second, m);
    return weights(MomentTable(first, m + 1), MomentTable(second, m + 1), gamma, m);
}

FringeHarmonic conditional_harmonic(const PiPolynomial& poly, const WeightVector& w) {
    const int m = poly.degree();
    if (w.detections() != m) throw std::invalid_argument("weight vector does not match polynomial degree");
    if (w.all_zero()) return {0.0, 0.0, true};

    const auto pi = poly.scaled_coefficients();

    // a0 = sum_j |pi_j|^2 (W_{j-1} + W_j), in log space
    std::vector<double> a_terms(static_cast<std::size_t>(m) + 1);
    double a_top = kNegInf;
    for (int j = 0; j <= m; ++j) {
        const auto& c = pi[static_cast<std::size_t>(j)];
        const double lw = log_add_exp(w.term(j - 1), w.term(j));
        const double t = (c.is_zero() || lw == kNegInf) ? kNegInf : lw + 2.0 * c.log_mag;
        a_terms[static_cast<std::size_t>(j)] = t;
        a_top = std::max(a_top, t);
    }
    if (a_top == kNegInf) return {0.0, 0.0, true};

    double a0 = 0.0;
    for (double t : a_terms)
        if (t != kNegInf) a0 += std::exp(t - a_top);

    // c1 / 2 = sum_k W_k pi_k conj(pi_{k+1}), scaled by the same exp(a_top)
    double re = 0.0;
    double im = 0.0;
    const auto interior = w.interior();
    for (int k = 0; k < m; ++k) {
        const auto& lo = pi[static_cast<std::size_t>(k)];
        const auto& hi = pi[static_cast<std::size_t>(k) + 1];
        const double lw = interior[static_cast<std::size_t>(k)];
        if (lo.is_zero() || hi.is_zero() || lw == kNegInf) continue;
        const double mag = std::exp(lw + lo.log_mag + hi.log_mag - a_top);
        const double ang = lo.phase - hi.phase;
        re += mag * std::cos(ang);
        im += mag * std::sin(ang);
    }
    const double c1 = 2.0 * std::hypot(re, im);
    return {std::min(1.0, c1 / a0), wrap_phase(std::atan2(im, re)), false};
}

std::vector<double> conditional_density(const PiPolynomial& poly, const WeightVector& w,
                                        const PhaseAxis& axis) {
    return conditional_harmonic(poly, w).evaluate(axis);
}

}  // namespace becphase
