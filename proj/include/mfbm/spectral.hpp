#pragma once

#include "mfbm/params.hpp"

#include <complex>

namespace mfbm {

// Cross-spectral density of increments, with the Fourier convention
//   S_ij(omega, delta) = (1/2pi) * integral exp(-i h omega) gamma_ij(h, delta) dh.

/// tau_ij(sign omega). sign_omega must be +1 or -1. tau_ji = conj(tau_ij).
std::complex<double> tau(const MfbmParams& params, Eigen::Index i, Eigen::Index j, int sign_omega);

/// S_ij(omega, delta). Throws std::domain_error for omega == 0 and
/// std::invalid_argument for delta <= 0.
std::complex<double> cross_spectral_density(const MfbmParams& params, Eigen::Index i, Eigen::Index j,
                                            double omega, double delta);

/// Leading term of |S_ij(omega, delta)| as omega -> 0.
double low_freq_modulus(const MfbmParams& params, Eigen::Index i, Eigen::Index j, double omega, double delta);

/// Frequency-free coherence |S_ij|^2 / (S_ii S_jj). Throws std::invalid_argument for i == j.
double coherence(const MfbmParams& params, Eigen::Index i, Eigen::Index j);

/// rho^2 sin^2(pi a/2) + eta^2 cos^2(pi a/2), or rho~^2 + (pi^2/4) eta~^2 for UnitSum pairs.
/// Equals |tau_ij|^2.
double tau_modulus_sq(const MfbmParams& params, Eigen::Index i, Eigen::Index j);

}  // namespace mfbm
