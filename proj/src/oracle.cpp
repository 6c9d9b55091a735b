#include "becphase/oracle.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace becphase::oracle {

namespace {

using cplx = std::complex<double>;

// Dense amplitudes over |a, b>, 0 <= a <= n1, 0 <= b <= n2.
struct TwoModeState {
    int n1;
    int n2;
    std::vector<cplx> amp;

    TwoModeState(int a, int b) : n1(a), n2(b), amp(static_cast<std::size_t>((a + 1) * (b + 1))) {}
    cplx& at(int a, int b) { return amp[static_cast<std::size_t>(a * (n2 + 1) + b)]; }
    cplx at(int a, int b) const { return amp[static_cast<std::size_t>(a * (n2 + 1) + b)]; }
};

TwoModeState apply_field(const TwoModeState& in, double gamma, double phi) {
    TwoModeState out(in.n1, in.n2);
    const cplx ph = std::polar(std::sqrt(gamma), -phi);
    for (int a = 0; a <= in.n1; ++a) {
        for (int b = 0; b <= in.n2; ++b) {
            const cplx c = in.at(a, b);
            if (c == cplx{}) continue;
            if (a > 0) out.at(a - 1, b) += std::sqrt(static_cast<double>(a)) * c;
            if (b > 0) out.at(a, b - 1) += ph * std::sqrt(static_cast<double>(b)) * c;
        }
    }
    return out;
}

double norm2(const TwoModeState& s) {
    double t = 0.0;
    for (const auto& c : s.amp) t += std::norm(c);
    return t;
}

void normalize_mean(std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    s /= static_cast<double>(v.size());
    if (!(s > 0.0)) throw std::runtime_error("oracle density vanished");
    for (double& x : v) x /= s;
}

}  // namespace

std::vector<double> mixture_joint_density(std::span<const double> p1, std::span<const double> p2, double gamma,
                                          std::span<const double> detected, std::span<const double> eval_phases) {
    std::vector<double> out(eval_phases.size(), 0.0);
    for (std::size_t n1 = 0; n1 < p1.size(); ++n1) {
        for (std::size_t n2 = 0; n2 < p2.size(); ++n2) {
            const double w = p1[n1] * p2[n2];
            if (w == 0.0) continue;
            TwoModeState s(static_cast<int>(n1), static_cast<int>(n2));
            s.at(static_cast<int>(n1), static_cast<int>(n2)) = 1.0;
            for (double phi : detected) s = apply_field(s, gamma, phi);
            for (std::size_t j = 0; j < eval_phases.size(); ++j) out[j] += w * norm2(apply_field(s, gamma, eval_phases[j]));
        }
    }
    return out;
}

std::vector<double> mixture_conditional_density(std::span<const double> p1, std::span<const double> p2, double gamma,
                                                std::span<const double> detected,
                                                std::span<const double> eval_phases) {
    auto v = mixture_joint_density(p1, p2, gamma, detected, eval_phases);
    normalize_mean(v);
    return v;
}

std::vector<double> product_filter(double lambda, std::span<const double> detected, std::span<const double> psi_grid) {
    std::vector<double> f(psi_grid.size(), 1.0);
    for (std::size_t j = 0; j < psi_grid.size(); ++j)
        for (double phi : detected) f[j] *= 1.0 + lambda * std::cos(phi - psi_grid[j]);
    normalize_mean(f);
    return f;
}

std::vector<double> poisson_product_density(double lambda, std::span<const double> detected,
                                            std::span<const double> eval_phases, int quadrature_points) {
    const double two_pi = 2.0 * std::acos(-1.0);
    std::vector<double> psi(static_cast<std::size_t>(quadrature_points));
    for (int q = 0; q < quadrature_points; ++q) psi[static_cast<std::size_t>(q)] = two_pi * (q + 0.5) / quadrature_points;
    const auto f = product_filter(lambda, detected, psi);
    std::vector<double> out(eval_phases.size());
    for (std::size_t j = 0; j < eval_phases.size(); ++j) {
        double acc = 0.0;
        for (std::size_t q = 0; q < psi.size(); ++q) acc += (1.0 + lambda * std::cos(eval_phases[j] - psi[q])) * f[q];
        out[j] = acc / static_cast<double>(psi.size());
    }
    return out;
}

std::vector<double> fock_distribution(int n) {
    if (n < 0) throw std::invalid_argument("negative occupation");
    std::vector<double> p(static_cast<std::size_t>(n) + 1, 0.0);
    p.back() = 1.0;
    return p;
}

std::vector<double> poisson_distribution(double mean, int max_n) {
    std::vector<double> p(static_cast<std::size_t>(max_n) + 1);
    for (int n = 0; n <= max_n; ++n)
        p[static_cast<std::size_t>(n)] = std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
    return p;
}

std::vector<double> thermal_distribution(double mean, int max_n) {
    std::vector<double> p(static_cast<std::size_t>(max_n) + 1);
    const double q = mean / (1.0 + mean);
    for (int n = 0; n <= max_n; ++n) p[static_cast<std::size_t>(n)] = std::pow(q, n) / (1.0 + mean);
    return p;
}

}  // namespace becphase::oracle
