#pragma once

// Reference evaluations that share no code with the engines: dense
// two-mode Fock-space operator application and direct product integrals.
// Only practical for small atom numbers and few detections.

#include <span>
#include <vector>

namespace becphase::oracle {

/// sum_{n1,n2} P1(n1) P2(n2) || psi(phi) psi(phi_m) ... psi(phi_1) |n1, n2> ||^2
/// at each evaluation phase, with psi(phi) = a1 + sqrt(gamma) e^{-i phi} a2.
/// Unnormalized.
std::vector<double> mixture_joint_density(std::span<const double> p1, std::span<const double> p2, double gamma,
                                          std::span<const double> detected, std::span<const double> eval_phases);

/// Conditional density normalized to mean 1 over uniformly spaced eval phases.
std::vector<double> mixture_conditional_density(std::span<const double> p1, std::span<const double> p2, double gamma,
                                                std::span<const double> detected,
                                                std::span<const double> eval_phases);

/// int dpsi/2pi [1 + lambda cos(phi - psi)] prod_k [1 + lambda cos(phi_k - psi)]
/// divided by int dpsi/2pi prod_k [...], by midpoint quadrature with
/// `quadrature_points` nodes (exact for more than m + 1 nodes).
std::vector<double> poisson_product_density(double lambda, std::span<const double> detected,
                                            std::span<const double> eval_phases, int quadrature_points = 4096);

/// prod_k [1 + lambda cos(phi_k - psi)] normalized to grid mean 1.
std::vector<double> product_filter(double lambda, std::span<const double> detected, std::span<const double> psi_grid);

/// Truncated probability vectors for building mixtures.
std::vector<double> fock_distribution(int n);
std::vector<double> poisson_distribution(double mean, int max_n);
std::vector<double> thermal_distribution(double mean, int max_n);

}  // namespace becphase::oracle
