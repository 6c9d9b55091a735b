#pragma once

// Exact m-detection conditional densities for diagonal number-state mixtures.
//
// The cumulative detection operator prod_j (a1 + sqrt(G) a2 e^{-i phi_j})
// expands with coefficients pi_k of prod_j (1 + z e^{-i phi_j}). All
// coefficients and weights live in log space: at m = 500 the raw
// coefficients reach ~1e150 and thermal weights ~1e1100.

#include <complex>
#include <span>
#include <vector>

#include "becphase/log_polar.hpp"
#include "becphase/model.hpp"
#include "becphase/phase_axis.hpp"

namespace becphase {

class PiPolynomial {
  public:
    /// Degree 0, pi_0 = 1.
    PiPolynomial();

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    /// Multiply by (1 + z e^{-i phase}): pi_k <- pi_k + pi_{k-1} e^{-i phase}.
    void update(double phase);

    /// Coefficient k relative to the global scale; the largest has log_mag 0.
    const LogPolar& scaled(int k) const { return coeffs_[static_cast<std::size_t>(k)]; }
    std::span<const LogPolar> scaled_coefficients() const { return coeffs_; }
    double global_log_scale() const { return global_log_scale_; }

    /// Unscaled coefficient in log-polar form.
    LogPolar coefficient(int k) const;

    /// Evaluates sum_k pi_k z^k; only meaningful while it fits in a double.
    std::complex<double> evaluate(std::complex<double> z) const;

  private:
    std::vector<LogPolar> coeffs_;
    double global_log_scale_ = 0.0;
};

/// Value-returning form of PiPolynomial::update.
PiPolynomial pi_update(PiPolynomial poly, double new_phase);

/// Log weights multiplying |pi_k e^{-i phi} + pi_{k+1}|^2, for k = -1 .. m.
/// The k = -1 and k = m entries are the pure single-condensate terms
/// <n1 ... (n1 - m)> and G^{m+1} <n2 ... (n2 - m)>.
class WeightVector {
  public:
    WeightVector(double lower_boundary, std::vector<double> interior, double upper_boundary);

    int detections() const { return static_cast<int>(interior_.size()); }
    std::span<const double> interior() const { return interior_; }
    double lower_boundary() const { return lower_; }
    double upper_boundary() const { return upper_; }

    /// Log weight of term k in [-1, m].
    double term(int k) const;
    bool all_zero() const;

  private:
    double lower_;
    std::vector<double> interior_;
    double upper_;
};

/// Log falling-factorial moments for factor counts 0 .. max_factors, cached
/// so that a run can build weights for every m without re-summing.
class MomentTable {
  public:
    MomentTable(const CondensateSpec& spec, int max_factors);
    double log_moment(int factors) const;
    int max_factors() const { return static_cast<int>(table_.size()) - 1; }

  private:
    std::vector<double> table_;
};

/// Throws ConfigError for number states that cannot supply m + 1 atoms.
WeightVector weights(const CondensateSpec& first, const CondensateSpec& second, double gamma, int m);
WeightVector weights(const MomentTable& first, const MomentTable& second, double gamma, int m);

/// Fringe content of the conditional density for detection m + 1.
///
/// The weighted sum over k collapses to a0 + Re(c1 e^{-i phi}) with
///   a0 = sum_k W_k (|pi_k|^2 + |pi_{k+1}|^2),  c1 = 2 sum_k W_k pi_k conj(pi_{k+1}),
/// so the mean-1 density is 1 + (|c1| / a0) cos(phi - arg c1).
FringeHarmonic conditional_harmonic(const PiPolynomial& poly, const WeightVector& w);

/// The mean-1 conditional density evaluated on a phase grid.
std::vector<double> conditional_density(const PiPolynomial& poly, const WeightVector& w,
                                        const PhaseAxis& axis);

}  // namespace becphase
